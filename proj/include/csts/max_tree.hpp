#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "csts/core.hpp"

namespace csts {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class CstsFlag : std::uint8_t { kUnknown, kCsts, kNotCsts };

struct PatternNode {
  Pattern pattern;
  Ratio pi;
  std::vector<InstanceId> last_support;  // I(s, m), ascending
  NodeId parent1 = kNoNode;              // elements[1..m-1]
  NodeId parent2 = kNoNode;              // elements[2..m]
  std::vector<NodeId> children;          // nodes whose parent1 is this node, canonical order
  std::vector<NodeId> cmax;
  std::vector<NodeId> rcmax;
  CstsFlag csts_flag = CstsFlag::kUnknown;
  bool closed = false;
};

struct PatternHash {
  std::size_t operator()(const Pattern& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto e : p.elements()) {
      h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Level-structured lattice of PI-strong patterns. levels()[k-1] holds the
/// patterns of length k in canonical order; node ids follow the same order.
class MaxTree {
 public:
  MaxTree() = default;
  explicit MaxTree(MiningConfig config) : config_(std::move(config)) {}

  const MiningConfig& config() const { return config_; }

  std::span<const PatternNode> nodes() const { return nodes_; }
  const PatternNode& node(NodeId id) const { return nodes_.at(id); }
  PatternNode& node(NodeId id) { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  std::size_t depth() const { return levels_.size(); }
  /// Nodes of pattern length k (1-based); empty span beyond the deepest level.
  std::span<const NodeId> level(std::size_t k) const {
    if (k == 0 || k > levels_.size()) return {};
    return levels_[k - 1];
  }

  std::optional<NodeId> find(const Pattern& p) const {
    if (index_.size() != nodes_.size()) {
      index_.clear();
      for (NodeId i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].pattern, i);
    }
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Appends a level; nodes must be in canonical order and of length depth()+1.
  void push_level(std::vector<PatternNode> level_nodes) {
    std::vector<NodeId> ids;
    ids.reserve(level_nodes.size());
    for (auto& n : level_nodes) {
      if (n.pattern.length() != levels_.size() + 1) throw std::logic_error("pattern length does not match level");
      const NodeId id = static_cast<NodeId>(nodes_.size());
      if (n.parent1 != kNoNode) nodes_.at(n.parent1).children.push_back(id);
      nodes_.push_back(std::move(n));
      ids.push_back(id);
    }
    levels_.push_back(std::move(ids));
  }

  /// True when max_length stopped generation while longer PI-strong patterns exist.
  bool truncated() const { return truncated_; }
  void set_truncated(bool t) { truncated_ = t; }

  bool bottom_up_done() const { return bottom_up_epsilon_.has_value(); }
  std::optional<Ratio> bottom_up_epsilon() const { return bottom_up_epsilon_; }
  void mark_bottom_up(Ratio eps) { bottom_up_epsilon_ = eps; }

  /// Clears cmax/rcmax/csts flags so the bottom-up phase can rerun with another margin.
  void reset_bottom_up() {
    for (auto& n : nodes_) {
      n.cmax.clear();
      n.rcmax.clear();
      n.csts_flag = CstsFlag::kUnknown;
    }
    bottom_up_epsilon_.reset();
  }

  /// Releases support sets once no further level will be generated.
  void drop_supports() {
    for (auto& n : nodes_) {
      n.last_support.clear();
      n.last_support.shrink_to_fit();
    }
  }

 private:
  MiningConfig config_;
  std::vector<PatternNode> nodes_;
  std::vector<std::vector<NodeId>> levels_;
  bool truncated_ = false;
  std::optional<Ratio> bottom_up_epsilon_;
  mutable std::unordered_map<Pattern, NodeId, PatternHash> index_;
};

}  // namespace csts
