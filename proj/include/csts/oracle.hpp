#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csts/core.hpp"
#include "csts/geo_time.hpp"

// Brute-force reference implementations. Nothing here shares code with the
// miners beyond the domain types and the distance functions.

namespace csts::oracle {

inline constexpr std::size_t kMaxInstances = 64;
inline constexpr std::size_t kMaxLength = 8;

class Refusal : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// N(e, F) by scanning every instance.
inline std::vector<InstanceId> naive_neighborhood(const EventDataset& d, const MiningConfig& cfg, InstanceId e,
                                                  TypeId type) {
  const DistanceMetric metric{cfg.metric, cfg.earth_radius_km};
  const auto& src = d.instance(e);
  std::vector<InstanceId> out;
  for (InstanceId p = 0; p < d.size(); ++p) {
    const auto& cand = d.instance(p);
    const auto dt = cand.time - src.time;
    if (cand.type == type && dt > 0 && dt <= cfg.window && distance(src, cand, metric) <= cfg.radius) {
      out.push_back(p);
    }
  }
  return out;
}

struct ScoredPattern {
  Pattern pattern;
  Ratio pi;
};

namespace detail {

inline void extend(const EventDataset& d, const MiningConfig& cfg, std::size_t max_len, std::vector<TypeId>& seq,
                   const std::vector<InstanceId>& support, Ratio pi, std::vector<ScoredPattern>& out) {
  if (cfg.passes_theta(pi)) out.push_back({Pattern(seq), pi});
  // Anti-monotonicity: no extension of a failing pattern can pass. At theta = 0
  // everything is enumerated so the result never relies on that argument.
  const bool prune = cfg.theta > Ratio{} && !cfg.passes_theta(pi);
  if (seq.size() == max_len || prune) return;
  for (const auto& t : d.types()) {
    if (d.by_type(t.id).empty()) continue;
    std::vector<bool> member(d.size(), false);
    for (InstanceId e : support) {
      for (InstanceId p : naive_neighborhood(d, cfg, e, t.id)) member[p] = true;
    }
    std::vector<InstanceId> next;
    for (InstanceId p = 0; p < d.size(); ++p) {
      if (member[p]) next.push_back(p);
    }
    const Ratio pr(static_cast<std::int64_t>(next.size()), static_cast<std::int64_t>(d.by_type(t.id).size()));
    seq.push_back(t.id);
    extend(d, cfg, max_len, seq, next, std::min(pi, pr), out);
    seq.pop_back();
  }
}

}  // namespace detail

/// Every PI-strong pattern up to max_len with its exact PI, canonical order.
inline std::vector<ScoredPattern> all_patterns(const EventDataset& d, const MiningConfig& cfg, std::size_t max_len) {
  if (d.size() > kMaxInstances || max_len > kMaxLength) {
    throw Refusal("oracle limited to " + std::to_string(kMaxInstances) + " instances and length " +
                  std::to_string(kMaxLength));
  }
  std::vector<ScoredPattern> out;
  if (max_len == 0) return out;
  for (const auto& t : d.types()) {
    const auto inst = d.by_type(t.id);
    if (inst.empty()) continue;
    std::vector<TypeId> seq{t.id};
    detail::extend(d, cfg, max_len, seq, std::vector<InstanceId>(inst.begin(), inst.end()), Ratio::integer(1), out);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.pattern < b.pattern; });
  return out;
}

/// Patterns with no proper supersequence of equal PI.
inline std::vector<ScoredPattern> closed(const std::vector<ScoredPattern>& all) {
  std::vector<ScoredPattern> out;
  for (const auto& s : all) {
    const bool has_closure = std::any_of(all.begin(), all.end(), [&](const ScoredPattern& t) {
      return t.pi == s.pi && is_proper_supersequence(t.pattern, s.pattern);
    });
    if (!has_closure) out.push_back(s);
  }
  return out;
}

/// Closures of `s`: closed supersequences (possibly s itself) with equal PI.
inline std::vector<Pattern> closures(const std::vector<ScoredPattern>& all, const Pattern& s) {
  std::vector<Pattern> out;
  const auto it = std::find_if(all.begin(), all.end(), [&](const auto& x) { return x.pattern == s; });
  if (it == all.end()) return out;
  for (const auto& c : closed(all)) {
    if (c.pi == it->pi && is_supersequence(c.pattern, s)) out.push_back(c.pattern);
  }
  return out;
}

/// C^max(s) for every pattern: among PI-strong proper supersequences t with
/// PI(t) >= PI(s) - eps, those of greatest length, then greatest PI.
inline std::map<Pattern, std::vector<Pattern>> cmax_sets(const std::vector<ScoredPattern>& all, Ratio epsilon) {
  std::map<Pattern, std::vector<Pattern>> out;
  for (const auto& s : all) {
    std::vector<const ScoredPattern*> qualifying;
    for (const auto& t : all) {
      if (is_proper_supersequence(t.pattern, s.pattern) && t.pi + epsilon >= s.pi) qualifying.push_back(&t);
    }
    std::size_t longest = 0;
    for (auto* t : qualifying) longest = std::max(longest, t->pattern.length());
    Ratio best;
    for (auto* t : qualifying) {
      if (t->pattern.length() == longest) best = std::max(best, t->pi);
    }
    auto& set = out[s.pattern];
    for (auto* t : qualifying) {
      if (t->pattern.length() == longest && t->pi == best) set.push_back(t->pattern);
    }
    std::sort(set.begin(), set.end());
  }
  return out;
}

/// Patterns appearing in some C^max, plus patterns whose own C^max is empty.
inline std::vector<ScoredPattern> csts(const std::vector<ScoredPattern>& all, Ratio epsilon) {
  const auto cmax = cmax_sets(all, epsilon);
  std::set<Pattern> appearing;
  for (const auto& [owner, set] : cmax) appearing.insert(set.begin(), set.end());
  std::vector<ScoredPattern> out;
  for (const auto& s : all) {
    if (cmax.at(s.pattern).empty() || appearing.count(s.pattern)) out.push_back(s);
  }
  return out;
}

struct RandomSpec {
  std::uint64_t seed = 1;
  std::size_t n_types = 5;
  std::size_t n_instances = 40;
  std::int64_t area = 100;     // square side, integer grid
  std::int64_t horizon = 200;  // minutes
};

/// Uniform integer coordinates in [0, area]², uniform integer times in
/// [0, horizon], uniform types "T0".."T{n-1}". Deterministic per seed.
inline EventDataset generate_random(const RandomSpec& spec) {
  if (spec.n_types == 0 || spec.area <= 0 || spec.horizon < 0) throw std::invalid_argument("invalid RandomSpec");
  std::mt19937_64 rng(spec.seed);
  auto below = [&](std::uint64_t bound) { return rng() % bound; };
  DatasetBuilder b;
  std::vector<std::string> labels;
  for (std::size_t t = 0; t < spec.n_types; ++t) {
    labels.push_back("T" + std::to_string(t));
    b.declare_type(labels.back());
  }
  for (std::size_t i = 0; i < spec.n_instances; ++i) {
    const auto& label = labels[below(spec.n_types)];
    const auto x = static_cast<double>(below(static_cast<std::uint64_t>(spec.area) + 1));
    const auto y = static_cast<double>(below(static_cast<std::uint64_t>(spec.area) + 1));
    const auto t = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(spec.horizon) + 1));
    b.add(label, x, y, t);
  }
  return std::move(b).build();
}

}  // namespace csts::oracle
