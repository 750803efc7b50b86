#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csts/ingestion.hpp"
#include "csts/oracle.hpp"
#include "csts/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitOracleRefused = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string input;
  std::string schema = "generic";
  std::string type_whitelist;
  double radius = 0;
  std::int64_t window = 0;
  std::vector<std::string> theta;
  std::vector<std::string> epsilon{"0"};
  std::string algorithm = "csts";
  std::string metric;
  std::string strictness = "gt";
  std::size_t max_length = 0;
  std::string out;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::size_t synthetic = 0;
  std::size_t synthetic_types = 5;
  std::int64_t area = 100;
  std::int64_t horizon = 200;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("--input", f.input,
                 "CSV input. generic: type,x,y,time_minutes. pittsburgh: INCIDENTHIERARCHYDESC, INCIDENTTIME, X, Y. "
                 "boston: INCIDENT_TYPE_DESCRIPTION or OFFENSE_CODE_GROUP, FROMDATE or OCCURRED_ON_DATE, Lat/Long "
                 "or Location \"(lat, lon)\"");
  cmd.add_option("--schema", f.schema, "Input schema")
      ->check(CLI::IsMember({"generic", "pittsburgh", "boston", "boston-reduced"}));
  cmd.add_option("--type-whitelist", f.type_whitelist, "Boston type list file (canonical|alias|... per line)");
  cmd.add_option("--radius", f.radius, "Spatial radius R (meters for geodesic, coordinate units otherwise)")
      ->required();
  cmd.add_option("--window", f.window, "Time window T in minutes")->required();
  cmd.add_option("--theta", f.theta, "Participation index threshold(s)")->delimiter(',')->required();
  cmd.add_option("--epsilon", f.epsilon, "Approximation margin(s)")->delimiter(',');
  cmd.add_option("--algorithm", f.algorithm, "all | closed | csts | oracle")
      ->check(CLI::IsMember({"all", "closed", "csts", "oracle"}));
  cmd.add_option("--metric", f.metric, "euclidean | geodesic (default: geodesic for portal schemas)")
      ->check(CLI::IsMember({"euclidean", "geodesic"}));
  cmd.add_option("--theta-strictness", f.strictness, "gt: pi > theta, ge: pi >= theta")
      ->check(CLI::IsMember({"gt", "ge"}));
  cmd.add_option("--max-length", f.max_length, "Longest pattern to mine")->check(CLI::PositiveNumber);
  cmd.add_option("--out", f.out, "Report path (mine) or output directory (sweep)");
  cmd.add_option("--threads", f.threads, "Worker threads for neighborhood and level generation")
      ->check(CLI::Range(1u, 1024u));
  cmd.add_option("--seed", f.seed, "Seed for --synthetic");
  cmd.add_option("--synthetic", f.synthetic, "Mine a seeded random dataset of this many instances instead of --input");
  cmd.add_option("--synthetic-types", f.synthetic_types, "Event types in the synthetic dataset")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--area", f.area, "Synthetic square side")->check(CLI::PositiveNumber);
  cmd.add_option("--horizon", f.horizon, "Synthetic time horizon in minutes")->check(CLI::NonNegativeNumber);
}

csts::Ratio parse_ratio(const std::string& s, const char* what) {
  try {
    return csts::Ratio::parse(s);
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid ") + what + " '" + s + "': " + e.what());
  }
}

struct Prepared {
  csts::EventDataset dataset;
  std::optional<csts::IngestReport> ingest;
  csts::MiningConfig base;
  std::vector<csts::Ratio> thetas;
  std::vector<csts::Ratio> epsilons;
  csts::Algorithm algorithm;
  std::string input_label;
};

Prepared prepare(const CommonFlags& f) {
  Prepared p;
  if (f.theta.empty()) throw UsageError("--theta needs at least one value");
  if (f.epsilon.empty()) throw UsageError("--epsilon needs at least one value");
  for (const auto& t : f.theta) p.thetas.push_back(parse_ratio(t, "theta"));
  for (const auto& e : f.epsilon) p.epsilons.push_back(parse_ratio(e, "epsilon"));
  p.algorithm = *csts::parse_algorithm(f.algorithm);

  const bool portal = f.schema != "generic";
  auto& cfg = p.base;
  cfg.radius = f.radius;
  cfg.window = f.window;
  cfg.metric = (f.metric.empty() ? portal : f.metric == "geodesic") ? csts::Metric::kGeodesic
                                                                    : csts::Metric::kEuclidean;
  cfg.strict_theta = f.strictness == "gt";
  if (f.max_length) cfg.max_length = f.max_length;
  cfg.threads = f.threads;
  cfg.theta = p.thetas.front();
  cfg.epsilon = p.epsilons.front();
  try {
    cfg.validate();
    for (const auto& t : p.thetas) (cfg.theta = t, cfg.validate());
    for (const auto& e : p.epsilons) (cfg.epsilon = e, cfg.validate());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.theta = p.thetas.front();
  cfg.epsilon = p.epsilons.front();

  if (f.synthetic > 0) {
    if (!f.input.empty()) throw UsageError("--input and --synthetic are exclusive");
    p.dataset = csts::oracle::generate_random({f.seed, f.synthetic_types, f.synthetic, f.area, f.horizon});
    p.input_label = "synthetic:" + std::to_string(f.synthetic) + ":seed=" + std::to_string(f.seed);
    return p;
  }
  if (f.input.empty()) throw UsageError("--input or --synthetic is required");
  p.input_label = f.input;
  std::optional<csts::TypeWhitelist> whitelist;
  if (!f.type_whitelist.empty()) whitelist = csts::TypeWhitelist::load(f.type_whitelist);
  csts::LoadResult loaded;
  if (f.schema == "generic") {
    loaded = csts::load_generic(f.input);
  } else if (f.schema == "pittsburgh") {
    loaded = csts::load_pittsburgh(f.input);
  } else {
    loaded = csts::load_boston(f.input, f.schema == "boston-reduced", whitelist);
  }
  p.dataset = std::move(loaded.dataset);
  p.ingest = loaded.report;
  return p;
}

std::vector<csts::RunReport> run(const CommonFlags& f, const Prepared& p) {
  auto runs = csts::run_grid(p.dataset, p.base, p.thetas, p.epsilons, p.algorithm);
  for (auto& r : runs) {
    r.input = p.input_label;
    r.schema = f.synthetic > 0 ? "synthetic" : f.schema;
    r.ingest = p.ingest;
  }
  return runs;
}

int cmd_mine(const CommonFlags& f) {
  if (f.theta.size() > 1 || f.epsilon.size() > 1) throw UsageError("mine takes one theta and one epsilon; use sweep");
  const auto p = prepare(f);
  const auto runs = run(f, p);
  if (f.out.empty()) {
    csts::write_jsonl(std::cout, runs.front());
    csts::write_summary_table(std::cerr, runs);
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + f.out);
    csts::write_jsonl(out, runs.front());
    csts::write_summary_table(std::cout, runs);
  }
  return 0;
}

std::string grid_name(const csts::RunReport& r) {
  auto clean = [](const csts::Ratio& x) {
    auto s = x.str();
    std::replace(s.begin(), s.end(), '/', '_');
    return s;
  };
  return "run_theta" + clean(r.config.theta) + "_eps" + clean(r.config.epsilon) + ".jsonl";
}

int cmd_sweep(const CommonFlags& f) {
  const auto p = prepare(f);
  const auto runs = run(f, p);
  csts::write_summary_table(std::cout, runs);
  if (f.out.empty()) return 0;

  namespace fs = std::filesystem;
  fs::create_directories(f.out);
  for (const auto& r : runs) {
    std::ofstream out(fs::path(f.out) / grid_name(r), std::ios::binary);
    csts::write_jsonl(out, r);
  }
  auto opt = [](const auto& v) {
    std::ostringstream s;
    if (v) s << *v;
    return s.str();
  };
  std::ofstream table(fs::path(f.out) / "sweep.csv", std::ios::binary);
  csts::csv::write_row(table, {"theta", "epsilon", "all", "closed", "csts", "csts_over_all", "csts_over_closed",
                               "index_s", "top_down_s", "bottom_up_s", "truncated"});
  for (const auto& r : runs) {
    csts::csv::write_row(table, {r.config.theta.str(), r.config.epsilon.str(), std::to_string(r.count_all()),
                                 opt(r.count_closed()), opt(r.count_csts()), opt(r.csts_over_all()),
                                 opt(r.csts_over_closed()), std::to_string(r.timings.index_s),
                                 std::to_string(r.timings.top_down_s), std::to_string(r.timings.bottom_up_s),
                                 r.truncated ? "true" : "false"});
  }
  // Percent series, one row per (theta, epsilon): the data behind ratio plots.
  std::ofstream series(fs::path(f.out) / "ratio_series.csv", std::ios::binary);
  csts::csv::write_row(series, {"theta", "epsilon", "percent_csts_of_all", "percent_csts_of_closed"});
  auto pct = [](std::optional<double> v) {
    std::ostringstream s;
    if (v) s << *v * 100.0;
    return s.str();
  };
  for (const auto& r : runs) {
    csts::csv::write_row(series, {std::to_string(r.config.theta.to_double()),
                                  std::to_string(r.config.epsilon.to_double()), pct(r.csts_over_all()),
                                  pct(r.csts_over_closed())});
  }
  return 0;
}

int cmd_query(const std::string& report_path, const std::string& pattern) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + report_path);
  const auto report = csts::read_jsonl(in);
  csts::PiEstimate est;
  try {
    est = csts::query_report(report, pattern);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::cout << "pattern    " << pattern << '\n';
  std::cout << "pi_strong  " << (est.pi_strong ? "yes" : "no") << '\n';
  if (est.pi_strong) {
    std::cout << "interval   [" << est.lower.str() << ", " << est.upper.str() << "] = [" << est.lower.to_double()
              << ", " << est.upper.to_double() << "]\n";
    std::cout << "exact      " << (est.exact ? "yes" : "no") << '\n';
    std::cout << "witness    ";
    std::string w;
    for (std::size_t i = 0; i < est.witness->length(); ++i) {
      w += (i ? "->" : "") + report.type_labels[(*est.witness)[i]];
    }
    std::cout << w << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal sequential pattern miner (all / closed / CSTS)"};
  app.require_subcommand(1);
  CommonFlags mine_flags, sweep_flags;
  auto* mine = app.add_subcommand("mine", "Mine one (theta, epsilon) configuration");
  add_common(*mine, mine_flags);
  auto* sweep = app.add_subcommand("sweep", "Mine a theta x epsilon grid and write the consolidated table");
  add_common(*sweep, sweep_flags);
  std::string report_path, pattern;
  auto* query = app.add_subcommand("query", "Approximate the PI of a pattern from a saved CSTS report");
  query->add_option("--report", report_path, "Report written by mine --algorithm csts")->required();
  query->add_option("--pattern", pattern, "Pattern such as \"B->B->C\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*mine) return cmd_mine(mine_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    return cmd_query(report_path, pattern);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const csts::oracle::Refusal& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOracleRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
