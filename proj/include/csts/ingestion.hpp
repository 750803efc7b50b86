#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csts/core.hpp"
#include "csts/csv.hpp"
#include "csts/geo_time.hpp"

namespace csts {

enum class RejectReason : std::size_t {
  kMissingType,
  kMissingCoordinates,
  kMissingTime,
  kUnparseable,
  kOutsidePeriod,
  kTypeNotSelected,
};
inline constexpr std::size_t kRejectReasonCount = 6;

inline std::string_view to_string(RejectReason r) {
  constexpr std::array<std::string_view, kRejectReasonCount> names{
      "missing_type", "missing_coordinates", "missing_time", "unparseable", "outside_period", "type_not_selected"};
  return names[static_cast<std::size_t>(r)];
}

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
  std::array<std::size_t, kRejectReasonCount> rejected_by{};
  std::size_t types_found = 0;
  std::size_t instances_kept = 0;

  std::size_t rejected(RejectReason r) const { return rejected_by[static_cast<std::size_t>(r)]; }
  void reject(RejectReason r) {
    ++rows_rejected;
    ++rejected_by[static_cast<std::size_t>(r)];
  }
};

/// Lower-cased, with every run of non-alphanumeric characters folded into one space.
inline std::string normalize_label(std::string_view s) {
  std::string out;
  bool gap = false;
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      if (gap && !out.empty()) out += ' ';
      gap = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      gap = true;
    }
  }
  return out;
}

/// Event-type whitelist. One type per line: `canonical label|alias|alias...`;
/// '#' starts a comment. Source labels match after normalize_label.
class TypeWhitelist {
 public:
  static TypeWhitelist parse(std::istream& in) {
    TypeWhitelist w;
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::vector<std::string> parts;
      std::stringstream ss(line);
      for (std::string part; std::getline(ss, part, '|');) {
        const auto first = part.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        parts.push_back(part.substr(first, part.find_last_not_of(" \t\r") - first + 1));
      }
      if (parts.empty()) continue;
      w.canonical_.push_back(parts.front());
      for (const auto& p : parts) {
        const auto [it, inserted] = w.by_normalized_.emplace(normalize_label(p), parts.front());
        if (!inserted && it->second != parts.front()) {
          throw std::invalid_argument("type whitelist: alias '" + p + "' maps to two types");
        }
      }
    }
    return w;
  }

  static TypeWhitelist parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
  }

  static TypeWhitelist load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open type whitelist " + path);
    return parse(in);
  }

  std::optional<std::string> match(std::string_view source_label) const {
    auto it = by_normalized_.find(normalize_label(source_label));
    if (it == by_normalized_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& canonical_labels() const { return canonical_; }

 private:
  std::vector<std::string> canonical_;
  std::map<std::string, std::string> by_normalized_;
};

// Same content as data/boston_reduced_types.txt and data/boston_complete_types.txt.
inline constexpr std::string_view kBostonReducedTypes = R"(# Ten least frequent crime types of the 2014 Boston extract.
violation of liquor laws|liquor violation|liquor law violation|violations of liquor laws
operating under influence|operating under the influence|oui
manslaughter
homicide
harassment
gambling offense|gambling|gambling offenses
embezzlement
crimes against children|offenses against child family|offenses against child|crimes against child
bomb|bomb hoax|bomb threat|explosives
arson
)";

inline constexpr std::string_view kBostonCompleteTypes = R"(# Best-effort list of 26 crime types (the source taxonomy is not pinned down).
aggravated assault|agg assault|aggravated assault battery
simple assault|assault simple|simple assault battery
auto theft|motor vehicle theft|auto theft recovery
burglary|residential burglary|commercial burglary|other burglary
robbery|armed robbery|street robbery|commercial robbery
larceny|other larceny|larceny theft
larceny from motor vehicle|larceny from mv
vandalism|criminal mischief|damage to property
drug charges|drug violation|drug violations
weapons violation|firearm violations|weapon violation
fraud|fraud and swindle|confidence games
forgery|counterfeiting|forgery counterfeiting
prostitution|commercialized vice|prostitution related
sex offenses|other sex offenses
rape|rape and attempted|sexual assault
disorderly conduct|disorderly
trespassing|criminal trespass
restraining order violations|restraining order violation
violation of liquor laws|liquor violation|liquor law violation|violations of liquor laws
operating under influence|operating under the influence|oui
homicide
harassment
gambling offense|gambling|gambling offenses
embezzlement
crimes against children|offenses against child family|offenses against child|crimes against child
arson
)";

enum class TimeFormat { kMinutes, kDateTime };

/// Column mapping and cleaning rules for one CSV source. Each field lists
/// candidate header names; the first one present in the file is used
/// (case-insensitive).
struct Schema {
  std::string name = "generic";
  std::vector<std::string> type_columns{"type"};
  std::vector<std::string> x_columns{"x"};
  std::vector<std::string> y_columns{"y"};
  std::vector<std::string> time_columns{"time_minutes"};
  /// Optional "(lat, lon)" column used when x/y are absent or blank.
  std::vector<std::string> location_columns;
  TimeFormat time_format = TimeFormat::kMinutes;
  std::string epoch;  // "YYYY-MM-DDTHH:MM" for kDateTime
  /// Accepted timestamps: [period_begin, period_end).
  std::optional<DateTime> period_begin;
  std::optional<DateTime> period_end;
  std::optional<TypeWhitelist> whitelist;
  /// Longitude/latitude: out-of-range degrees are unparseable, (0, 0) is missing.
  bool geographic = false;
};

inline Schema generic_schema() { return {}; }

inline Schema pittsburgh_schema() {
  Schema s;
  s.name = "pittsburgh";
  s.type_columns = {"INCIDENTHIERARCHYDESC"};
  s.time_columns = {"INCIDENTTIME"};
  s.x_columns = {"X", "Longitude", "LONG"};
  s.y_columns = {"Y", "Latitude", "LAT"};
  s.time_format = TimeFormat::kDateTime;
  s.epoch = "2017-01-01T00:00";
  s.period_begin = parse_datetime_or_throw("2017-01-01");
  s.period_end = parse_datetime_or_throw("2020-01-01");
  s.geographic = true;
  return s;
}

inline Schema boston_schema(bool reduced, std::optional<TypeWhitelist> whitelist = std::nullopt) {
  Schema s;
  s.name = reduced ? "boston-reduced" : "boston";
  s.type_columns = {"INCIDENT_TYPE_DESCRIPTION", "OFFENSE_CODE_GROUP", "OFFENSE_DESCRIPTION"};
  s.time_columns = {"FROMDATE", "OCCURRED_ON_DATE"};
  s.x_columns = {"Long", "Longitude"};
  s.y_columns = {"Lat", "Latitude"};
  s.location_columns = {"Location"};
  s.time_format = TimeFormat::kDateTime;
  s.epoch = "2014-01-01T00:00";
  s.period_begin = parse_datetime_or_throw("2014-01-01");
  s.period_end = parse_datetime_or_throw("2015-01-01");
  s.whitelist = whitelist ? std::move(whitelist)
                          : TypeWhitelist::parse(reduced ? kBostonReducedTypes : kBostonCompleteTypes);
  s.geographic = true;
  return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
    return std::tolower(x) == std::tolower(y);
  });
}

inline std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                              const std::vector<std::string>& candidates) {
  for (const auto& c : candidates) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (iequals(trim(header[i]), c)) return i;
    }
  }
  return std::nullopt;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

/// "(42.35, -71.06)" -> (lat, lon).
inline std::optional<std::pair<double, double>> parse_location(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto lat = parse_double(trim(s.substr(0, comma)));
  auto lon = parse_double(trim(s.substr(comma + 1)));
  if (!lat || !lon) return std::nullopt;
  return std::pair{*lat, *lon};
}

}  // namespace detail

struct LoadResult {
  EventDataset dataset;
  IngestReport report;
};

/// Maps the schema's columns into a dataset. Rows with a missing or
/// unparseable mapped field, outside the period, or of a non-selected type are
/// rejected and counted; the file itself is only refused when unreadable or
/// lacking a mapped column.
inline LoadResult load_csv(std::istream& in, const Schema& schema) {
  csv::Reader reader(in);
  const auto header = reader.next();
  LoadResult result;
  if (!header) throw std::runtime_error("csv input has no header row");

  auto require = [&](const std::vector<std::string>& candidates, const char* what) {
    auto col = detail::find_column(*header, candidates);
    if (!col) {
      std::string names;
      for (const auto& c : candidates) names += (names.empty() ? "" : "/") + c;
      throw std::runtime_error(std::string("csv input lacks the ") + what + " column (" + names + ")");
    }
    return *col;
  };
  const auto type_col = require(schema.type_columns, "type");
  const auto time_col = require(schema.time_columns, "time");
  const auto loc_col = detail::find_column(*header, schema.location_columns);
  auto x_col = detail::find_column(*header, schema.x_columns);
  auto y_col = detail::find_column(*header, schema.y_columns);
  if (!loc_col || x_col || y_col) {
    x_col = require(schema.x_columns, "x/longitude");
    y_col = require(schema.y_columns, "y/latitude");
  }

  std::optional<DateTime> epoch;
  if (schema.time_format == TimeFormat::kDateTime) {
    epoch = parse_datetime(schema.epoch);
    if (!epoch) throw std::invalid_argument("schema epoch '" + schema.epoch + "' is not a datetime");
  }

  DatasetBuilder builder;
  builder.set_epoch(schema.epoch);
  auto& rep = result.report;
  while (auto row = reader.next()) {
    ++rep.rows_read;
    auto field = [&](std::optional<std::size_t> col) -> std::string_view {
      return col && *col < row->size() ? detail::trim((*row)[*col]) : std::string_view{};
    };

    const auto raw_type = field(type_col);
    if (raw_type.empty()) {
      rep.reject(RejectReason::kMissingType);
      continue;
    }

    // Coordinates: x/y first, then the combined location column.
    std::optional<double> x, y;
    bool coords_missing = false;
    const auto xs = field(x_col), ys = field(y_col);
    if (!xs.empty() && !ys.empty()) {
      x = detail::parse_double(xs);
      y = detail::parse_double(ys);
    } else if (const auto ls = field(loc_col); loc_col && !ls.empty()) {
      if (auto ll = detail::parse_location(ls)) {
        y = ll->first;
        x = ll->second;
      }
    } else {
      coords_missing = true;
    }
    if (!coords_missing && x && y && schema.geographic && *x == 0.0 && *y == 0.0) coords_missing = true;
    if (coords_missing) {
      rep.reject(RejectReason::kMissingCoordinates);
      continue;
    }
    if (!x || !y || (schema.geographic && !valid_degrees(EventInstance{0, *x, *y, 0}))) {
      rep.reject(RejectReason::kUnparseable);
      continue;
    }

    const auto ts = field(time_col);
    if (ts.empty()) {
      rep.reject(RejectReason::kMissingTime);
      continue;
    }
    std::int64_t minutes = 0;
    if (schema.time_format == TimeFormat::kMinutes) {
      auto m = detail::parse_int(ts);
      if (!m || *m < 0) {
        rep.reject(RejectReason::kUnparseable);
        continue;
      }
      minutes = *m;
    } else {
      auto t = parse_datetime(ts);
      if (!t) {
        rep.reject(RejectReason::kUnparseable);
        continue;
      }
      if ((schema.period_begin && *t < *schema.period_begin) || (schema.period_end && *t >= *schema.period_end) ||
          *t < *epoch) {
        rep.reject(RejectReason::kOutsidePeriod);
        continue;
      }
      minutes = timestamp_to_minutes(*t, *epoch);
    }

    std::string label(raw_type);
    if (schema.whitelist) {
      auto canonical = schema.whitelist->match(raw_type);
      if (!canonical) {
        rep.reject(RejectReason::kTypeNotSelected);
        continue;
      }
      label = *canonical;
    }
    builder.add(label, *x, *y, minutes);
    ++rep.instances_kept;
  }
  result.dataset = std::move(builder).build();
  rep.types_found = result.dataset.types().size();
  return result;
}

inline LoadResult load_file(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_csv(in, schema);
}

inline LoadResult load_generic(const std::string& path, const Schema& schema = generic_schema()) {
  return load_file(path, schema);
}

inline LoadResult load_pittsburgh(const std::string& path) { return load_file(path, pittsburgh_schema()); }

inline LoadResult load_boston(const std::string& path, bool reduced,
                              std::optional<TypeWhitelist> whitelist = std::nullopt) {
  return load_file(path, boston_schema(reduced, std::move(whitelist)));
}

/// Writes the generic `type,x,y,time_minutes` form. Coordinates use the
/// shortest representation that reads back to the same double.
inline void write_generic(std::ostream& out, const EventDataset& d) {
  csv::write_row(out, {"type", "x", "y", "time_minutes"});
  auto num = [](double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
  };
  for (const auto& e : d.instances()) {
    csv::write_row(out, {d.label(e.type), num(e.x), num(e.y), std::to_string(e.time)});
  }
}

}  // namespace csts
