#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "csts/core.hpp"
#include "csts/max_tree.hpp"
#include "csts/neighborhood.hpp"
#include "csts/parallel.hpp"

namespace csts {

/// PR(s, m) = |I(s, m)| / |D(s[m])|.
inline Ratio participation_ratio(const PatternNode& node, const EventDataset& d) {
  const auto total = d.by_type(node.pattern.back()).size();
  if (total == 0) throw std::domain_error("participation ratio of an event type with no instances");
  return Ratio(static_cast<std::int64_t>(node.last_support.size()), static_cast<std::int64_t>(total));
}

namespace detail {

/// Reusable union-of-neighborhoods buffer, one per worker.
class SupportUnion {
 public:
  explicit SupportUnion(std::size_t n_instances) : stamp_(n_instances, 0) {}

  std::vector<InstanceId> operator()(std::span<const InstanceId> sources, TypeId target,
                                     const NeighborhoodIndex& idx) {
    ++round_;
    std::vector<InstanceId> out;
    for (InstanceId e : sources) {
      for (InstanceId p : idx.neighborhood(e, target)) {
        if (stamp_[p] != round_) {
          stamp_[p] = round_;
          out.push_back(p);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t round_ = 0;
};

inline PatternNode make_candidate(Pattern pattern, std::vector<InstanceId> support, Ratio prefix_pi,
                                  const EventDataset& d, NodeId p1, NodeId p2) {
  PatternNode n;
  n.pattern = std::move(pattern);
  n.last_support = std::move(support);
  n.pi = std::min(prefix_pi, participation_ratio(n, d));
  n.parent1 = p1;
  n.parent2 = p2;
  return n;
}

}  // namespace detail

/// L1: one node per event type that has instances.
inline std::vector<PatternNode> mine_level1(const EventDataset& d) {
  std::vector<PatternNode> level;
  for (const auto& t : d.types()) {
    const auto inst = d.by_type(t.id);
    if (inst.empty()) continue;
    PatternNode n;
    n.pattern = Pattern{t.id};
    n.pi = Ratio::integer(1);
    n.last_support.assign(inst.begin(), inst.end());
    level.push_back(std::move(n));
  }
  return level;
}

/// L2 from every ordered pair of L1 nodes, self-pairs included.
inline std::vector<PatternNode> mine_level2(const MaxTree& tree, const EventDataset& d, const NeighborhoodIndex& idx,
                                            const MiningConfig& cfg) {
  const auto l1 = tree.level(1);
  std::vector<std::vector<PatternNode>> per_first(l1.size());
  parallel_chunks(l1.size(), cfg.threads, [&](std::size_t begin, std::size_t end, unsigned) {
    detail::SupportUnion unite(d.size());
    for (std::size_t i = begin; i < end; ++i) {
      const auto& si = tree.node(l1[i]);
      for (NodeId sj_id : l1) {
        const auto& sj = tree.node(sj_id);
        auto support = unite(si.last_support, sj.pattern.back(), idx);
        auto cand = detail::make_candidate(si.pattern.extended(sj.pattern.back()), std::move(support),
                                           Ratio::integer(1), d, l1[i], sj_id);
        if (cfg.passes_theta(cand.pi)) per_first[i].push_back(std::move(cand));
      }
    }
  });
  std::vector<PatternNode> level;
  for (auto& v : per_first) std::move(v.begin(), v.end(), std::back_inserter(level));
  return level;
}

/// L_k (k >= 3) from L_{k-1}: each first parent si is joined with the children
/// of its own second parent, which are exactly the candidate second parents.
inline std::vector<PatternNode> gen_and_verify(const MaxTree& tree, std::size_t k, const EventDataset& d,
                                               const NeighborhoodIndex& idx, const MiningConfig& cfg) {
  const auto prev = tree.level(k - 1);
  std::vector<std::vector<PatternNode>> per_first(prev.size());
  parallel_chunks(prev.size(), cfg.threads, [&](std::size_t begin, std::size_t end, unsigned) {
    detail::SupportUnion unite(d.size());
    for (std::size_t i = begin; i < end; ++i) {
      const auto& si = tree.node(prev[i]);
      const auto& sl = tree.node(si.parent2);
      for (NodeId sj_id : sl.children) {
        const TypeId last = tree.node(sj_id).pattern.back();
        auto support = unite(si.last_support, last, idx);
        auto cand = detail::make_candidate(si.pattern.extended(last), std::move(support), si.pi, d, prev[i], sj_id);
        if (cfg.passes_theta(cand.pi)) per_first[i].push_back(std::move(cand));
      }
    }
  });
  std::vector<PatternNode> level;
  for (auto& v : per_first) std::move(v.begin(), v.end(), std::back_inserter(level));
  return level;
}

/// Top-down phase: every PI-strong pattern, up to cfg.max_length.
inline MaxTree mine_all(const EventDataset& d, const NeighborhoodIndex& idx, const MiningConfig& cfg) {
  cfg.validate();
  MaxTree tree(cfg);
  const std::size_t cap = cfg.max_length.value_or(std::numeric_limits<std::size_t>::max());
  auto level = mine_level1(d);
  if (level.empty()) return tree;
  tree.push_level(std::move(level));
  for (std::size_t k = 2;; ++k) {
    level = k == 2 ? mine_level2(tree, d, idx, cfg) : gen_and_verify(tree, k, d, idx, cfg);
    if (level.empty()) break;
    if (k > cap) {
      tree.set_truncated(true);
      break;
    }
    tree.push_level(std::move(level));
  }
  return tree;
}

inline MaxTree mine_all(const EventDataset& d, const MiningConfig& cfg) {
  const auto idx = build_index(d, cfg);
  return mine_all(d, idx, cfg);
}

}  // namespace csts
