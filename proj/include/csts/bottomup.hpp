#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "csts/max_tree.hpp"

namespace csts {

namespace detail {

/// Shared state for the bottom-up traversal of one candidate supersequence.
/// `visited[n] == stamp` marks nodes already examined for the current candidate;
/// each (candidate, node) pair is then evaluated once instead of once per path
/// through the parent lattice.
class SupersequenceVerifier {
 public:
  SupersequenceVerifier(MaxTree& tree, Ratio epsilon)
      : tree_(tree), epsilon_(epsilon), visited_(tree.size(), 0), in_rcmax_(tree.size(), 0) {}

  /// Tests `s` against the given starting nodes and all of their ancestors.
  void run(NodeId s, std::initializer_list<NodeId> starts) {
    ++stamp_;
    stack_.clear();
    for (NodeId start : starts) {
      if (start != kNoNode) stack_.push_back(start);
    }
    // Nodes are popped in LIFO order; the final cmax/rcmax state does not
    // depend on the visiting order for a fixed candidate.
    while (!stack_.empty()) {
      const NodeId si = stack_.back();
      stack_.pop_back();
      if (visited_[si] == stamp_) continue;
      visited_[si] = stamp_;
      if (!visit(s, si)) continue;
      const auto& n = tree_.node(si);
      if (n.parent1 != kNoNode) stack_.push_back(n.parent1);
      if (n.parent2 != kNoNode) stack_.push_back(n.parent2);
    }
  }

 private:
  // One VerifySupersequence step. Returns false when the margin gate fails,
  // in which case no ancestor of si can accept s either (their PI is >= PI(si)).
  bool visit(NodeId s_id, NodeId si_id) {
    PatternNode& s = tree_.node(s_id);
    PatternNode& si = tree_.node(si_id);
    if (s.pi + epsilon_ < si.pi) return false;
    if (in_rcmax_[si_id] == stamp_) return true;

    if (!si.cmax.empty() && tree_.node(si.cmax.front()).pattern.length() != s.pattern.length()) return true;

    const bool empty = si.cmax.empty();
    const Ratio current = empty ? Ratio{} : tree_.node(si.cmax.front()).pi;
    if (empty || s.pi == current) {
      si.cmax.push_back(s_id);
      s.rcmax.push_back(si_id);
      in_rcmax_[si_id] = stamp_;
    } else if (s.pi > current) {
      for (NodeId k : si.cmax) {
        auto& rc = tree_.node(k).rcmax;
        rc.erase(std::remove(rc.begin(), rc.end(), si_id), rc.end());
      }
      si.cmax.assign(1, s_id);
      s.rcmax.push_back(si_id);
      in_rcmax_[si_id] = stamp_;
    }
    return true;
  }

  MaxTree& tree_;
  Ratio epsilon_;
  std::vector<std::uint64_t> visited_;
  std::vector<std::uint64_t> in_rcmax_;
  std::vector<NodeId> stack_;
  std::uint64_t stamp_ = 0;
};

}  // namespace detail

/// Checks whether `s` is an epsilon-constricted maximal supersequence of `si`
/// and, recursively, of si's ancestors. Updates cmax/rcmax in place.
inline void verify_supersequence(MaxTree& tree, NodeId s, NodeId si, Ratio epsilon) {
  detail::SupersequenceVerifier(tree, epsilon).run(s, {si});
}

/// Bottom-up phase: deepest level first, each node is offered to both parents.
inline void run_bottom_up(MaxTree& tree, Ratio epsilon) {
  tree.reset_bottom_up();
  detail::SupersequenceVerifier verifier(tree, epsilon);
  for (std::size_t k = tree.depth(); k >= 2; --k) {
    for (NodeId s : tree.level(k)) {
      const auto& n = tree.node(s);
      verifier.run(s, {n.parent1, n.parent2});
    }
  }
  for (std::size_t i = 0; i < tree.size(); ++i) {
    auto& n = tree.node(static_cast<NodeId>(i));
    std::sort(n.cmax.begin(), n.cmax.end());
    std::sort(n.rcmax.begin(), n.rcmax.end());
  }
  tree.mark_bottom_up(epsilon);
}

/// Nodes with a non-empty rcmax, plus nodes whose rcmax and cmax are both empty.
inline std::vector<NodeId> extract_csts(MaxTree& tree) {
  if (!tree.bottom_up_done()) throw std::logic_error("extract_csts called before run_bottom_up");
  std::vector<NodeId> out;
  for (NodeId i = 0; i < tree.size(); ++i) {
    auto& n = tree.node(i);
    const bool csts = !n.rcmax.empty() || n.cmax.empty();
    n.csts_flag = csts ? CstsFlag::kCsts : CstsFlag::kNotCsts;
    if (csts) out.push_back(i);
  }
  return out;
}

}  // namespace csts
