#pragma once

#include <chrono>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csts/analysis.hpp"
#include "csts/bottomup.hpp"
#include "csts/core.hpp"
#include "csts/ingestion.hpp"
#include "csts/oracle.hpp"
#include "csts/topdown.hpp"

namespace csts {

enum class Algorithm { kAll, kClosed, kCsts, kOracle };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kAll: return "all";
    case Algorithm::kClosed: return "closed";
    case Algorithm::kCsts: return "csts";
    case Algorithm::kOracle: return "oracle";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::kAll, Algorithm::kClosed, Algorithm::kCsts, Algorithm::kOracle}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

struct PatternRecord {
  std::vector<std::string> labels;
  Ratio pi;
  std::optional<bool> closed;
  std::optional<bool> csts;
  std::optional<std::size_t> cmax_size;
  std::optional<std::size_t> rcmax_size;

  std::string key() const {
    std::string out;
    for (const auto& l : labels) out += (out.empty() ? "" : "->") + l;
    return out;
  }
};

struct PhaseTimings {
  double index_s = 0;
  double top_down_s = 0;
  double bottom_up_s = 0;
};

/// One mining run: configuration echo, the canonical pattern listing, and a
/// summary. Counts are derived from the listing.
struct RunReport {
  std::string input;
  std::string schema;
  MiningConfig config;
  Algorithm algorithm = Algorithm::kAll;
  std::vector<std::string> type_labels;
  std::size_t instances = 0;
  std::optional<IngestReport> ingest;
  PhaseTimings timings;
  bool truncated = false;
  std::vector<PatternRecord> patterns;

  std::size_t count_all() const { return patterns.size(); }
  std::optional<std::size_t> count_closed() const { return count_flag(&PatternRecord::closed); }
  std::optional<std::size_t> count_csts() const { return count_flag(&PatternRecord::csts); }

  std::optional<double> csts_over_all() const { return ratio(count_csts(), count_all()); }
  std::optional<double> csts_over_closed() const {
    auto c = count_closed();
    return c ? ratio(count_csts(), *c) : std::nullopt;
  }

 private:
  std::optional<std::size_t> count_flag(std::optional<bool> PatternRecord::*flag) const {
    if (algorithm == Algorithm::kAll) return std::nullopt;
    if (algorithm == Algorithm::kClosed && flag == &PatternRecord::csts) return std::nullopt;
    std::size_t n = 0;
    for (const auto& p : patterns) n += (p.*flag).value_or(false);
    return n;
  }
  static std::optional<double> ratio(std::optional<std::size_t> num, std::size_t den) {
    if (!num || den == 0) return std::nullopt;
    return static_cast<double>(*num) / static_cast<double>(den);
  }
};

namespace detail {

inline std::vector<std::string> labels_of(const Pattern& p, const EventDataset& d) {
  std::vector<std::string> out;
  for (auto t : p.elements()) out.push_back(d.label(t));
  return out;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline RunReport blank_report(const EventDataset& d, const MiningConfig& cfg, Algorithm algorithm) {
  RunReport r;
  r.config = cfg;
  r.algorithm = algorithm;
  r.instances = d.size();
  for (const auto& t : d.types()) r.type_labels.push_back(t.label);
  return r;
}

inline void fill_from_tree(RunReport& r, const MaxTree& tree, const EventDataset& d) {
  r.truncated = tree.truncated();
  r.patterns.clear();
  r.patterns.reserve(tree.size());
  const bool closed = r.algorithm != Algorithm::kAll;
  const bool csts = r.algorithm == Algorithm::kCsts;
  for (const auto& n : tree.nodes()) {
    PatternRecord p{labels_of(n.pattern, d), n.pi, {}, {}, {}, {}};
    if (closed) p.closed = n.closed;
    if (csts) {
      p.csts = n.csts_flag == CstsFlag::kCsts;
      p.cmax_size = n.cmax.size();
      p.rcmax_size = n.rcmax.size();
    }
    r.patterns.push_back(std::move(p));
  }
}

inline RunReport oracle_report(const EventDataset& d, const MiningConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t cap = std::min(cfg.max_length.value_or(oracle::kMaxLength), oracle::kMaxLength);
  if (cfg.max_length && *cfg.max_length > oracle::kMaxLength) {
    throw oracle::Refusal("oracle limited to patterns of length " + std::to_string(oracle::kMaxLength));
  }
  auto all = oracle::all_patterns(d, cfg, cap);
  RunReport r = blank_report(d, cfg, Algorithm::kOracle);
  const auto closed = oracle::closed(all);
  const auto cmax = oracle::cmax_sets(all, cfg.epsilon);
  const auto csts = oracle::csts(all, cfg.epsilon);
  std::map<Pattern, std::size_t> rcmax;
  for (const auto& [owner, set] : cmax) {
    for (const auto& m : set) ++rcmax[m];
  }
  auto contains = [](const std::vector<oracle::ScoredPattern>& v, const Pattern& p) {
    return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.pattern == p; });
  };
  for (const auto& s : all) {
    PatternRecord p{labels_of(s.pattern, d), s.pi, contains(closed, s.pattern), contains(csts, s.pattern),
                    cmax.at(s.pattern).size(), rcmax.count(s.pattern) ? rcmax.at(s.pattern) : 0};
    if (s.pattern.length() == cap && !cfg.max_length) r.truncated = true;
    r.patterns.push_back(std::move(p));
  }
  r.timings.top_down_s = seconds_since(start);
  return r;
}

}  // namespace detail

/// Runs `algorithm` for every (theta, epsilon) grid point, theta-major. The
/// neighborhood index is built once and each theta's tree is shared by its
/// epsilon values. `base` supplies R, T, metric, strictness and max length.
inline std::vector<RunReport> run_grid(const EventDataset& d, const MiningConfig& base,
                                       const std::vector<Ratio>& thetas, const std::vector<Ratio>& epsilons,
                                       Algorithm algorithm) {
  if (thetas.empty() || epsilons.empty()) throw std::invalid_argument("theta and epsilon lists must be non-empty");
  std::vector<RunReport> out;
  if (algorithm == Algorithm::kOracle) {
    for (const auto& th : thetas) {
      for (const auto& eps : epsilons) {
        auto cfg = base;
        cfg.theta = th;
        cfg.epsilon = eps;
        cfg.validate();
        out.push_back(detail::oracle_report(d, cfg));
      }
    }
    return out;
  }
  base.validate();
  auto start = std::chrono::steady_clock::now();
  const auto idx = build_index(d, base);
  const double index_s = detail::seconds_since(start);
  for (const auto& th : thetas) {
    auto cfg = base;
    cfg.theta = th;
    cfg.epsilon = epsilons.front();
    start = std::chrono::steady_clock::now();
    auto tree = mine_all(d, idx, cfg);
    const double top_down_s = detail::seconds_since(start);
    if (algorithm != Algorithm::kAll) extract_closed(tree);
    for (const auto& eps : epsilons) {
      cfg.epsilon = eps;
      cfg.validate();
      RunReport r = detail::blank_report(d, cfg, algorithm);
      r.timings.index_s = index_s;
      r.timings.top_down_s = top_down_s;
      if (algorithm == Algorithm::kCsts) {
        start = std::chrono::steady_clock::now();
        run_bottom_up(tree, eps);
        extract_csts(tree);
        r.timings.bottom_up_s = detail::seconds_since(start);
      }
      detail::fill_from_tree(r, tree, d);
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline RunReport run_once(const EventDataset& d, const MiningConfig& cfg, Algorithm algorithm) {
  return std::move(run_grid(d, cfg, {cfg.theta}, {cfg.epsilon}, algorithm).front());
}

// ---- serialization -------------------------------------------------------

using Json = nlohmann::ordered_json;

inline Json config_record(const RunReport& r) {
  const auto& c = r.config;
  Json j;
  j["record"] = "config";
  j["input"] = r.input;
  j["schema"] = r.schema;
  j["algorithm"] = to_string(r.algorithm);
  j["radius"] = c.radius;
  j["window"] = c.window;
  j["metric"] = c.metric == Metric::kGeodesic ? "geodesic" : "euclidean";
  j["earth_radius_km"] = c.earth_radius_km;
  j["theta"] = c.theta.str();
  j["theta_decimal"] = c.theta.to_double();
  j["theta_strictness"] = c.strict_theta ? "gt" : "ge";
  j["epsilon"] = c.epsilon.str();
  j["epsilon_decimal"] = c.epsilon.to_double();
  j["max_length"] = c.max_length ? Json(*c.max_length) : Json(nullptr);
  j["instances"] = r.instances;
  j["types"] = r.type_labels;
  return j;
}

inline Json pattern_record(const PatternRecord& p) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["record"] = "pattern";
  j["pattern"] = p.key();
  j["length"] = p.labels.size();
  j["pi"] = p.pi.str();
  j["pi_decimal"] = p.pi.to_double();
  j["closed"] = opt(p.closed);
  j["csts"] = opt(p.csts);
  j["cmax_size"] = opt(p.cmax_size);
  j["rcmax_size"] = opt(p.rcmax_size);
  return j;
}

/// Timing-dependent fields live only here, so config and pattern lines are
/// reproducible byte for byte.
inline Json summary_record(const RunReport& r) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["record"] = "summary";
  j["all"] = r.count_all();
  j["closed"] = opt(r.count_closed());
  j["csts"] = opt(r.count_csts());
  j["csts_over_all"] = opt(r.csts_over_all());
  j["csts_over_closed"] = opt(r.csts_over_closed());
  j["truncated"] = r.truncated;
  j["threads"] = r.config.threads;
  j["seconds"] = {{"index", r.timings.index_s},
                  {"top_down", r.timings.top_down_s},
                  {"bottom_up", r.timings.bottom_up_s}};
  if (r.ingest) {
    Json rej;
    for (std::size_t i = 0; i < kRejectReasonCount; ++i) {
      rej[std::string(to_string(static_cast<RejectReason>(i)))] = r.ingest->rejected_by[i];
    }
    j["ingest"] = {{"rows_read", r.ingest->rows_read},
                   {"rows_rejected", r.ingest->rows_rejected},
                   {"rejected_by", rej},
                   {"types_found", r.ingest->types_found},
                   {"instances_kept", r.ingest->instances_kept}};
  }
  return j;
}

/// Config line, one line per pattern (canonical order), summary line.
inline void write_jsonl(std::ostream& out, const RunReport& r) {
  out << config_record(r).dump() << '\n';
  for (const auto& p : r.patterns) out << pattern_record(p).dump() << '\n';
  out << summary_record(r).dump() << '\n';
}

/// Reads back the config and pattern listing written by write_jsonl. Timings
/// and ingest details are not restored.
inline RunReport read_jsonl(std::istream& in) {
  RunReport r;
  bool have_config = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("report line " + std::to_string(lineno) + ": " + e.what());
    }
    const auto kind = j.value("record", "");
    if (kind == "config") {
      have_config = true;
      r.input = j.at("input");
      r.schema = j.at("schema");
      auto alg = parse_algorithm(j.at("algorithm").get<std::string>());
      if (!alg) throw std::runtime_error("report: unknown algorithm");
      r.algorithm = *alg;
      r.config.radius = j.at("radius");
      r.config.window = j.at("window");
      r.config.metric = j.at("metric") == "geodesic" ? Metric::kGeodesic : Metric::kEuclidean;
      r.config.earth_radius_km = j.at("earth_radius_km");
      r.config.theta = Ratio::parse(j.at("theta").get<std::string>());
      r.config.strict_theta = j.at("theta_strictness") == "gt";
      r.config.epsilon = Ratio::parse(j.at("epsilon").get<std::string>());
      if (!j.at("max_length").is_null()) r.config.max_length = j.at("max_length").get<std::size_t>();
      r.instances = j.at("instances");
      r.type_labels = j.at("types").get<std::vector<std::string>>();
    } else if (kind == "pattern") {
      PatternRecord p;
      const auto key = j.at("pattern").get<std::string>();
      for (std::size_t pos = 0;;) {
        const auto arrow = key.find("->", pos);
        p.labels.push_back(key.substr(pos, arrow - pos));
        if (arrow == std::string::npos) break;
        pos = arrow + 2;
      }
      p.pi = Ratio::parse(j.at("pi").get<std::string>());
      if (!j.at("closed").is_null()) p.closed = j.at("closed").get<bool>();
      if (!j.at("csts").is_null()) p.csts = j.at("csts").get<bool>();
      if (!j.at("cmax_size").is_null()) p.cmax_size = j.at("cmax_size").get<std::size_t>();
      if (!j.at("rcmax_size").is_null()) p.rcmax_size = j.at("rcmax_size").get<std::size_t>();
      r.patterns.push_back(std::move(p));
    } else if (kind == "summary") {
      r.truncated = j.value("truncated", false);
    }
  }
  if (!have_config) throw std::runtime_error("report has no config record");
  return r;
}

/// Human-readable summary table; cosmetic, not a stable format.
inline void write_summary_table(std::ostream& out, const std::vector<RunReport>& runs) {
  auto cell = [](const auto& v) -> std::string {
    if (!v) return "-";
    std::ostringstream s;
    s << *v;
    return s.str();
  };
  auto pct = [](std::optional<double> v) -> std::string {
    if (!v) return "-";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << *v * 100.0 << '%';
    return s.str();
  };
  out << std::left << std::setw(10) << "theta" << std::setw(10) << "epsilon" << std::right << std::setw(10) << "all"
      << std::setw(10) << "closed" << std::setw(10) << "csts" << std::setw(12) << "csts/all" << std::setw(13)
      << "csts/closed" << std::setw(12) << "topdown_s" << std::setw(12) << "bottomup_s" << '\n';
  for (const auto& r : runs) {
    out << std::left << std::setw(10) << r.config.theta.to_double() << std::setw(10) << r.config.epsilon.to_double()
        << std::right << std::setw(10) << r.count_all() << std::setw(10) << cell(r.count_closed()) << std::setw(10)
        << cell(r.count_csts()) << std::setw(12) << pct(r.csts_over_all()) << std::setw(13)
        << pct(r.csts_over_closed()) << std::setw(12) << std::fixed << std::setprecision(3) << r.timings.top_down_s
        << std::setw(12) << r.timings.bottom_up_s << '\n'
        << std::defaultfloat;
    if (r.truncated) out << "  (listing truncated at max length)\n";
  }
}

/// Query against a saved CSTS report.
/// Unknown labels raise std::invalid_argument.
inline PiEstimate query_report(const RunReport& r, std::string_view pattern_text) {
  if (r.algorithm != Algorithm::kCsts && r.algorithm != Algorithm::kOracle) {
    throw std::invalid_argument("query needs a report produced with --algorithm csts or oracle");
  }
  DatasetBuilder b;
  for (const auto& l : r.type_labels) b.declare_type(l);
  const auto universe = std::move(b).build();
  auto to_pattern = [&](const std::vector<std::string>& ls) {
    std::vector<TypeId> ids;
    for (const auto& l : ls) {
      auto t = universe.find_type(l);
      if (!t) throw std::invalid_argument("unknown event type '" + l + "'");
      ids.push_back(*t);
    }
    return Pattern(std::move(ids));
  };
  std::vector<CstsEntry> csts;
  for (const auto& p : r.patterns) {
    if (p.csts.value_or(false)) csts.push_back({to_pattern(p.labels), p.pi});
  }
  return approximate_pi(parse_pattern(pattern_text, universe), csts, r.config.epsilon);
}

}  // namespace csts
