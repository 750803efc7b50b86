#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csts/analysis.hpp"
#include "csts/bottomup.hpp"
#include "csts/oracle.hpp"
#include "csts/topdown.hpp"

// Helpers shared by the unit suites and the acceptance binary.
namespace csts::testing {

using Scored = std::vector<std::pair<Pattern, Ratio>>;

inline Scored scored(const MaxTree& tree, const std::vector<NodeId>& ids) {
  Scored out;
  for (auto id : ids) out.emplace_back(tree.node(id).pattern, tree.node(id).pi);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline Scored scored_all(const MaxTree& tree) {
  std::vector<NodeId> ids(tree.size());
  for (NodeId i = 0; i < tree.size(); ++i) ids[i] = i;
  return scored(tree, ids);
}

inline Scored scored(const std::vector<oracle::ScoredPattern>& v) {
  Scored out;
  for (const auto& s : v) out.emplace_back(s.pattern, s.pi);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline std::map<Pattern, std::vector<Pattern>> cmax_of(const MaxTree& tree) {
  std::map<Pattern, std::vector<Pattern>> out;
  for (const auto& n : tree.nodes()) {
    auto& set = out[n.pattern];
    for (auto c : n.cmax) set.push_back(tree.node(c).pattern);
    std::sort(set.begin(), set.end());
  }
  return out;
}

inline std::vector<std::string> names(const Scored& s, const EventDataset& d) {
  std::vector<std::string> out;
  for (const auto& [p, pi] : s) out.push_back(to_string(p, d));
  return out;
}

/// Everything the property suites check for one mined tree; empty when all hold.
inline std::vector<std::string> theorem_violations(MaxTree& tree, Ratio epsilon) {
  std::vector<std::string> bad;
  // Anti-monotonicity on every parent edge.
  for (const auto& n : tree.nodes()) {
    for (auto p : {n.parent1, n.parent2}) {
      if (p != kNoNode && tree.node(p).pi < n.pi) bad.push_back("anti-monotonicity broken on a parent edge");
    }
  }
  const auto closed_ids = extract_closed(tree);
  std::set<Pattern> closed;
  for (auto id : closed_ids) closed.insert(tree.node(id).pattern);

  run_bottom_up(tree, epsilon);
  const auto csts_ids = extract_csts(tree);
  std::vector<CstsEntry> entries = to_entries(tree, csts_ids);
  for (const auto& e : entries) {
    if (!closed.count(e.pattern)) bad.push_back("CSTS pattern that is not closed");
  }
  // cmax/rcmax symmetry and homogeneity.
  for (NodeId i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(i);
    for (auto c : n.cmax) {
      const auto& rc = tree.node(c).rcmax;
      if (std::find(rc.begin(), rc.end(), i) == rc.end()) bad.push_back("cmax/rcmax asymmetry");
      if (tree.node(c).pi != tree.node(n.cmax.front()).pi ||
          tree.node(c).pattern.length() != tree.node(n.cmax.front()).pattern.length()) {
        bad.push_back("heterogeneous cmax set");
      }
    }
    for (auto r : n.rcmax) {
      const auto& cm = tree.node(r).cmax;
      if (std::find(cm.begin(), cm.end(), i) == cm.end()) bad.push_back("rcmax/cmax asymmetry");
    }
  }
  // Approximation interval and coverage for every PI-strong pattern.
  for (const auto& n : tree.nodes()) {
    if (!is_pi_strong_via_csts(n.pattern, entries)) bad.push_back("pattern without a CSTS supersequence");
    const auto est = approximate_pi(n.pattern, entries, epsilon);
    if (!est.pi_strong || est.lower > n.pi || n.pi > est.upper || saturating_sub(est.upper, est.lower) > epsilon) {
      bad.push_back("approximation interval misses the true PI");
    }
  }
  // epsilon = 0 reproduces the closed set.
  run_bottom_up(tree, Ratio{});
  const auto csts0 = extract_csts(tree);
  if (csts0 != closed_ids) bad.push_back("CSTS at epsilon 0 differs from the closed set");
  run_bottom_up(tree, epsilon);
  extract_csts(tree);
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

}  // namespace csts::testing
