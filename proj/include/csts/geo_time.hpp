#pragma once

#include <algorithm>
#include <tuple>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "csts/core.hpp"

namespace csts {

struct DistanceMetric {
  Metric kind = Metric::kEuclidean;
  double earth_radius_km = 6371.0;
};

inline double euclidean_distance(const EventInstance& a, const EventInstance& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool valid_degrees(const EventInstance& e) {
  return e.x >= -180.0 && e.x <= 180.0 && e.y >= -90.0 && e.y <= 90.0;
}

inline double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

/// Haversine distance in meters; x is longitude and y is latitude, both in degrees.
inline double geodesic_distance(const EventInstance& p, const EventInstance& q, double earth_radius_km) {
  if (!valid_degrees(p) || !valid_degrees(q)) {
    throw std::invalid_argument("geodesic distance needs lon in [-180,180] and lat in [-90,90]");
  }
  // Fixed operand order so d(p,q) == d(q,p) bit for bit.
  const bool swap = std::tie(q.y, q.x) < std::tie(p.y, p.x);
  const EventInstance& a = swap ? q : p;
  const EventInstance& b = swap ? p : q;
  const double lat1 = degrees_to_radians(a.y);
  const double lat2 = degrees_to_radians(b.y);
  const double d_slat = std::sin((lat2 - lat1) / 2.0);
  const double d_slon = std::sin((degrees_to_radians(b.x) - degrees_to_radians(a.x)) / 2.0);
  const double h = d_slat * d_slat + d_slon * d_slon * std::cos(lat1) * std::cos(lat2);
  return 2.0 * earth_radius_km * 1000.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

inline double distance(const EventInstance& a, const EventInstance& b, const DistanceMetric& m) {
  return m.kind == Metric::kEuclidean ? euclidean_distance(a, b) : geodesic_distance(a, b, m.earth_radius_km);
}

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant's days_from_civil).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool number(int digits_min, int digits_max, int& out) {
    int n = 0;
    int v = 0;
    while (pos_ < s_.size() && n < digits_max && s_[pos_] >= '0' && s_[pos_] <= '9') {
      v = v * 10 + (s_[pos_++] - '0');
      ++n;
    }
    out = v;
    return n >= digits_min;
  }
  bool lit(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  std::string_view rest() const { return s_.substr(pos_); }
  void skip_spaces() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Seconds since 1970-01-01T00:00:00, timezone-naive.
using DateTime = std::int64_t;

/// Accepts "YYYY-MM-DD", "YYYY-MM-DD[T ]HH:MM[:SS[.fff]]" with an optional trailing
/// "Z" or "+hh[:mm]" (ignored: times are treated as local wall-clock), and
/// "MM/DD/YYYY HH:MM[:SS] [AM|PM]".
inline std::optional<DateTime> parse_datetime(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r')) text.remove_suffix(1);
  detail::Cursor c(text);
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  bool us_format = false;
  int first = 0;
  if (!c.number(1, 4, first)) return std::nullopt;
  if (c.lit('-')) {
    year = first;
    if (!c.number(1, 2, month) || !c.lit('-') || !c.number(1, 2, day)) return std::nullopt;
  } else if (c.lit('/')) {
    us_format = true;
    month = first;
    if (!c.number(1, 2, day) || !c.lit('/') || !c.number(4, 4, year)) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!c.done()) {
    if (!c.lit('T') && !c.lit(' ')) return std::nullopt;
    c.skip_spaces();
    if (!c.number(1, 2, hour) || !c.lit(':') || !c.number(2, 2, minute)) return std::nullopt;
    if (c.lit(':')) {
      if (!c.number(2, 2, second)) return std::nullopt;
      if (c.lit('.')) {
        int frac = 0;
        if (!c.number(1, 9, frac)) return std::nullopt;
      }
    }
    c.skip_spaces();
    if (us_format || c.peek() == 'A' || c.peek() == 'P') {
      const auto rest = c.rest();
      if (rest == "AM" || rest == "PM") {
        if (hour < 1 || hour > 12) return std::nullopt;
        hour = hour % 12 + (rest == "PM" ? 12 : 0);
      } else if (!rest.empty()) {
        return std::nullopt;
      }
    } else if (!c.done()) {
      if (!(c.lit('Z') || c.lit('+') || c.lit('-'))) return std::nullopt;
      // Zone designators are accepted and ignored.
    }
  }
  if (month < 1 || month > 12 || day < 1 || static_cast<unsigned>(day) > detail::days_in_month(year, month) ||
      hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }
  return detail::days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
         hour * 3600 + minute * 60 + second;
}

inline DateTime parse_datetime_or_throw(std::string_view text) {
  auto t = parse_datetime(text);
  if (!t) throw std::invalid_argument("unparseable datetime '" + std::string(text) + "'");
  return *t;
}

/// Whole minutes from `epoch` to `t`, truncating seconds. Times before the epoch are rejected.
inline std::int64_t timestamp_to_minutes(DateTime t, DateTime epoch) {
  if (t < epoch) throw std::out_of_range("timestamp precedes the dataset epoch");
  return (t - epoch) / 60;
}

}  // namespace csts
