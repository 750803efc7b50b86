#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "csts/core.hpp"
#include "csts/geo_time.hpp"
#include "csts/parallel.hpp"

namespace csts {

/// N(e, F) for every instance e and type F: instances p of type F with
/// distance(p, e) <= R and p.time - e.time in (0, T].
///
/// Built by one time-ordered sweep. Instance ids are already in time order
/// (see canonical_instance_less), so each source scans forward from the first
/// strictly later instance until the window closes. Neighbors are stored per
/// source, grouped by type, in a CSR layout.
class NeighborhoodIndex {
 public:
  NeighborhoodIndex() = default;

  NeighborhoodIndex(const EventDataset& d, const MiningConfig& cfg) : radius_(cfg.radius), window_(cfg.window) {
    metric_ = {cfg.metric, cfg.earth_radius_km};
    const auto inst = d.instances();
    const std::size_t n = inst.size();
    n_types_ = d.types().size();
    if (cfg.metric == Metric::kGeodesic) {
      for (const auto& e : inst) {
        if (!valid_degrees(e)) throw std::invalid_argument("geodesic metric needs coordinates in degrees");
      }
    }
    // A great-circle arc is never shorter than its latitude span.
    const double lat_span_deg =
        cfg.radius / (cfg.earth_radius_km * 1000.0) * 180.0 / std::numbers::pi * (1.0 + 1e-9) + 1e-12;

    struct Chunk {
      std::vector<std::uint32_t> counts;
      std::vector<TypeId> types;
      std::vector<InstanceId> ids;
    };
    const unsigned workers = std::max(1u, cfg.threads);
    std::vector<Chunk> chunks(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    parallel_chunks(n, static_cast<unsigned>(chunks.size()), [&](std::size_t begin, std::size_t end, unsigned w) {
      Chunk& out = chunks[w];
      std::vector<std::pair<TypeId, InstanceId>> found;
      std::size_t first_later = begin;
      for (std::size_t i = begin; i < end; ++i) {
        const auto& e = inst[i];
        if (first_later <= i) first_later = i + 1;
        while (first_later < n && inst[first_later].time == e.time) ++first_later;
        found.clear();
        for (std::size_t j = first_later; j < n && inst[j].time - e.time <= window_; ++j) {
          const auto& p = inst[j];
          if (metric_.kind == Metric::kGeodesic && std::abs(p.y - e.y) > lat_span_deg) continue;
          if (distance(e, p, metric_) <= radius_) found.emplace_back(p.type, static_cast<InstanceId>(j));
        }
        std::sort(found.begin(), found.end());
        out.counts.push_back(static_cast<std::uint32_t>(found.size()));
        for (const auto& [t, id] : found) {
          out.types.push_back(t);
          out.ids.push_back(id);
        }
      }
    });
    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (auto& c : chunks) {
      for (auto cnt : c.counts) offsets_.push_back(offsets_.back() + cnt);
      types_.insert(types_.end(), c.types.begin(), c.types.end());
      ids_.insert(ids_.end(), c.ids.begin(), c.ids.end());
    }
  }

  /// The neighbors of `e` with type `type`, ascending by id.
  std::span<const InstanceId> neighborhood(InstanceId e, TypeId type) const {
    if (e + 1 >= offsets_.size()) throw std::out_of_range("unknown instance id");
    if (type >= n_types_) throw std::out_of_range("unknown event type");
    const auto first = types_.begin() + static_cast<std::ptrdiff_t>(offsets_[e]);
    const auto last = types_.begin() + static_cast<std::ptrdiff_t>(offsets_[e + 1]);
    const auto [lo, hi] = std::equal_range(first, last, type);
    return {ids_.data() + (lo - types_.begin()), static_cast<std::size_t>(hi - lo)};
  }

  /// Every neighbor of `e` regardless of type.
  std::span<const InstanceId> all_neighbors(InstanceId e) const {
    if (e + 1 >= offsets_.size()) throw std::out_of_range("unknown instance id");
    return {ids_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }

  std::size_t instance_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t pair_count() const { return ids_.size(); }
  double radius() const { return radius_; }
  std::int64_t window() const { return window_; }

 private:
  double radius_ = 0.0;
  std::int64_t window_ = 0;
  DistanceMetric metric_;
  std::size_t n_types_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<TypeId> types_;
  std::vector<InstanceId> ids_;
};

inline NeighborhoodIndex build_index(const EventDataset& d, const MiningConfig& cfg) {
  return NeighborhoodIndex(d, cfg);
}

}  // namespace csts
