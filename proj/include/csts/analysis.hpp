#pragma once

#include <optional>
#include <span>
#include <vector>

#include "csts/core.hpp"
#include "csts/max_tree.hpp"

namespace csts {

/// Closed patterns of the tree: no proper supersequence with equal PI.
///
/// Only one-step extensions (the nodes having s as parent1 or parent2) are
/// examined. If some longer supersequence u of s had PI(u) = PI(s), the
/// contiguous chain s ⊂ s' ⊂ ... ⊂ u passes through a length |s|+1 pattern s'
/// with PI(u) <= PI(s') <= PI(s) by anti-monotonicity, so PI(s') = PI(s) and
/// s' is PI-strong, hence present in the tree.
inline std::vector<NodeId> extract_closed(MaxTree& tree) {
  std::vector<bool> open(tree.size(), false);
  for (const auto& n : tree.nodes()) {
    if (n.parent1 != kNoNode && tree.node(n.parent1).pi == n.pi) open[n.parent1] = true;
    if (n.parent2 != kNoNode && tree.node(n.parent2).pi == n.pi) open[n.parent2] = true;
  }
  std::vector<NodeId> closed;
  for (NodeId i = 0; i < tree.size(); ++i) {
    tree.node(i).closed = !open[i];
    if (!open[i]) closed.push_back(i);
  }
  return closed;
}

struct CstsEntry {
  Pattern pattern;
  Ratio pi;
};

inline std::vector<CstsEntry> to_entries(const MaxTree& tree, std::span<const NodeId> ids) {
  std::vector<CstsEntry> out;
  out.reserve(ids.size());
  for (NodeId id : ids) out.push_back({tree.node(id).pattern, tree.node(id).pi});
  return out;
}

struct PiEstimate {
  bool pi_strong = false;
  Ratio lower;
  Ratio upper;
  std::optional<Pattern> witness;
  bool exact = false;
};

/// Recovers an interval for PI(q) from a CSTS set built with margin `epsilon`.
///
/// The witness is the supersequence of q in the set with the greatest PI
/// (ties: shorter, then canonical). Every member of C^max(q) belongs to the set
/// and satisfies PI(q) - eps <= PI(member) <= PI(q); any supersequence has
/// PI <= PI(q). Hence PI(q) lies in [best, best + eps].
inline PiEstimate approximate_pi(const Pattern& q, std::span<const CstsEntry> csts, Ratio epsilon) {
  PiEstimate est;
  const CstsEntry* best = nullptr;
  for (const auto& c : csts) {
    if (c.pattern == q) {
      est.pi_strong = true;
      est.exact = true;
      est.lower = est.upper = c.pi;
      est.witness = c.pattern;
      return est;
    }
    if (!is_proper_supersequence(c.pattern, q)) continue;
    if (!best || c.pi > best->pi ||
        (c.pi == best->pi && (c.pattern.length() < best->pattern.length() ||
                              (c.pattern.length() == best->pattern.length() && c.pattern < best->pattern)))) {
      best = &c;
    }
  }
  if (!best) return est;
  est.pi_strong = true;
  est.lower = best->pi;
  est.upper = std::min(best->pi + epsilon, Ratio::integer(1));
  est.witness = best->pattern;
  return est;
}

inline bool is_pi_strong_via_csts(const Pattern& q, std::span<const CstsEntry> csts) {
  for (const auto& c : csts) {
    if (is_supersequence(c.pattern, q)) return true;
  }
  return false;
}

}  // namespace csts
