#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "csts/rational.hpp"

namespace csts {

using TypeId = std::uint32_t;
using InstanceId = std::uint32_t;

struct EventType {
  TypeId id = 0;
  std::string label;
};

struct EventInstance {
  TypeId type = 0;
  double x = 0.0;  // meters (planar) or longitude degrees (geodesic)
  double y = 0.0;  // meters (planar) or latitude degrees (geodesic)
  std::int64_t time = 0;  // minutes from the dataset epoch

  friend bool operator==(const EventInstance&, const EventInstance&) = default;
};

/// Canonical instance order: (time, type, x, y). Instance ids are positions in this order.
inline bool canonical_instance_less(const EventInstance& a, const EventInstance& b) {
  return std::tie(a.time, a.type, a.x, a.y) < std::tie(b.time, b.type, b.x, b.y);
}

/// Immutable event collection with its type universe and per-type instance lists.
class EventDataset {
 public:
  EventDataset() = default;

  std::span<const EventType> types() const { return types_; }
  std::span<const EventInstance> instances() const { return instances_; }
  const EventInstance& instance(InstanceId id) const { return instances_.at(id); }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }

  /// D(F): ids of every instance of type F, ascending.
  std::span<const InstanceId> by_type(TypeId type) const { return by_type_.at(type); }

  const std::string& label(TypeId type) const { return types_.at(type).label; }

  std::optional<TypeId> find_type(std::string_view label) const {
    auto it = std::lower_bound(types_.begin(), types_.end(), label,
                               [](const EventType& t, std::string_view l) { return t.label < l; });
    if (it == types_.end() || it->label != label) return std::nullopt;
    return it->id;
  }

  const std::string& epoch() const { return epoch_; }

  friend bool operator==(const EventDataset& a, const EventDataset& b) {
    if (a.types_.size() != b.types_.size() || a.instances_ != b.instances_) return false;
    for (std::size_t i = 0; i < a.types_.size(); ++i) {
      if (a.types_[i].label != b.types_[i].label) return false;
    }
    return true;
  }

 private:
  friend class DatasetBuilder;

  std::vector<EventType> types_;
  std::vector<EventInstance> instances_;
  std::vector<std::vector<InstanceId>> by_type_;
  std::string epoch_;
};

/// Collects labelled records, then assigns label-sorted type ids and canonical instance ids.
class DatasetBuilder {
 public:
  void declare_type(std::string label) { labels_.emplace(std::move(label), 0); }

  void add(const std::string& label, double x, double y, std::int64_t time) {
    if (time < 0) throw std::invalid_argument("event time must be non-negative");
    if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("event coordinates must be finite");
    labels_.emplace(label, 0);
    pending_.push_back({label, x, y, time});
  }

  void set_epoch(std::string epoch) { epoch_ = std::move(epoch); }

  EventDataset build() && {
    EventDataset d;
    d.epoch_ = std::move(epoch_);
    TypeId next = 0;
    for (auto& [label, id] : labels_) {
      id = next++;
      d.types_.push_back({id, label});
    }
    d.instances_.reserve(pending_.size());
    for (const auto& p : pending_) {
      d.instances_.push_back({labels_.at(p.label), p.x, p.y, p.time});
    }
    std::stable_sort(d.instances_.begin(), d.instances_.end(), canonical_instance_less);
    d.by_type_.assign(d.types_.size(), {});
    for (InstanceId i = 0; i < d.instances_.size(); ++i) {
      d.by_type_[d.instances_[i].type].push_back(i);
    }
    return d;
  }

 private:
  struct Pending {
    std::string label;
    double x;
    double y;
    std::int64_t time;
  };
  std::map<std::string, TypeId> labels_;
  std::vector<Pending> pending_;
  std::string epoch_;
};

/// A sequence of event types. Ordered by canonical key: length first, then
/// lexicographically by type id.
class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(std::vector<TypeId> elements) : elements_(std::move(elements)) {}
  Pattern(std::initializer_list<TypeId> elements) : elements_(elements) {}

  std::size_t length() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  TypeId operator[](std::size_t i) const { return elements_[i]; }
  TypeId front() const { return elements_.front(); }
  TypeId back() const { return elements_.back(); }
  std::span<const TypeId> elements() const { return elements_; }

  Pattern extended(TypeId last) const {
    Pattern p = *this;
    p.elements_.push_back(last);
    return p;
  }

  friend bool operator==(const Pattern&, const Pattern&) = default;

  friend std::strong_ordering operator<=>(const Pattern& a, const Pattern& b) {
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.elements_.begin(), a.elements_.end(), b.elements_.begin(),
                                                  b.elements_.end());
  }

 private:
  std::vector<TypeId> elements_;
};

/// Contiguous containment: `inner` occurs in `outer` at some offset.
inline bool is_supersequence(const Pattern& outer, const Pattern& inner) {
  if (inner.length() > outer.length()) return false;
  const auto o = outer.elements();
  const auto i = inner.elements();
  return std::search(o.begin(), o.end(), i.begin(), i.end()) != o.end();
}

inline bool is_proper_supersequence(const Pattern& outer, const Pattern& inner) {
  return outer.length() > inner.length() && is_supersequence(outer, inner);
}

inline std::string to_string(const Pattern& p, const EventDataset& d) {
  std::string out;
  for (std::size_t i = 0; i < p.length(); ++i) {
    if (i) out += "->";
    out += d.label(p[i]);
  }
  return out;
}

/// Parses "A->B->C" against the dataset's labels.
inline Pattern parse_pattern(std::string_view text, const EventDataset& d) {
  std::vector<TypeId> elements;
  std::size_t start = 0;
  while (true) {
    const auto arrow = text.find("->", start);
    const auto token = text.substr(start, arrow == std::string_view::npos ? std::string_view::npos : arrow - start);
    const auto id = d.find_type(token);
    if (!id) throw std::invalid_argument("unknown event type '" + std::string(token) + "'");
    elements.push_back(*id);
    if (arrow == std::string_view::npos) break;
    start = arrow + 2;
  }
  return Pattern(std::move(elements));
}

enum class Metric { kEuclidean, kGeodesic };

struct MiningConfig {
  double radius = 1.0;                 // R, meters
  std::int64_t window = 1;             // T, minutes
  Ratio theta;                         // participation index threshold
  Ratio epsilon;                       // approximation margin
  Metric metric = Metric::kEuclidean;
  bool strict_theta = true;            // pi > theta; false selects pi >= theta
  std::optional<std::size_t> max_length;
  double earth_radius_km = 6371.0;
  unsigned threads = 1;

  bool passes_theta(const Ratio& pi) const { return strict_theta ? pi > theta : pi >= theta; }

  void validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be > 0");
    if (window <= 0) throw std::invalid_argument("window must be > 0");
    if (theta >= Ratio::integer(1)) throw std::invalid_argument("theta must be in [0, 1)");
    if (epsilon > Ratio::integer(1)) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (max_length && *max_length == 0) throw std::invalid_argument("max_length must be >= 1");
    if (!(earth_radius_km > 0.0)) throw std::invalid_argument("earth radius must be > 0");
  }
};

}  // namespace csts
