#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "csts/core.hpp"
#include "csts/oracle.hpp"

// Reference 26-instance dataset: 2 A, 8 B, 8 C, 3 D, 5 E on a line (y = 0),
// mined with R = 10 and T = 20. Instances sit on time stages 15 minutes apart
// so that only consecutive stages can be neighbors, and x positions select
// which of those pairs fall within R. Mirrored in data/table1_fixture.csv.

namespace csts::fixture {

inline constexpr double kRadius = 10.0;
inline constexpr std::int64_t kWindow = 20;

struct NamedInstance {
  std::string_view name;
  std::string_view type;
  double x;
  std::int64_t time;
};

inline constexpr std::array<NamedInstance, 26> kInstances{{
    {"a1", "A", 0, 0},    {"a2", "A", 20, 15},
    {"b1", "B", 0, 15},   {"b2", "B", 1, 15},   {"b3", "B", 10, 30},  {"b4", "B", 11, 30},
    {"b5", "B", 95, 15},  {"b6", "B", 100, 15}, {"b7", "B", 101, 15}, {"b8", "B", 100, 0},
    {"c1", "C", 10, 45},  {"c2", "C", 11, 45},  {"c3", "C", 12, 45},  {"c4", "C", 10, 75},
    {"c5", "C", 11, 75},  {"c6", "C", 500, 15}, {"c7", "C", 501, 15}, {"c8", "C", 300, 0},
    {"d1", "D", -5, 30},  {"d2", "D", -4, 30},  {"d3", "D", 95, 30},
    {"e1", "E", 10, 60},  {"e2", "E", 11, 60},  {"e3", "E", 300, 15}, {"e4", "E", 301, 15},
    {"e5", "E", 500, 0},
}};

inline EventDataset build_table1_fixture() {
  DatasetBuilder b;
  for (const auto& i : kInstances) b.add(std::string(i.type), i.x, 0.0, i.time);
  return std::move(b).build();
}

inline MiningConfig config(std::string_view theta, std::string_view epsilon = "0", bool strict = true) {
  MiningConfig cfg;
  cfg.radius = kRadius;
  cfg.window = kWindow;
  cfg.theta = Ratio::parse(theta);
  cfg.epsilon = Ratio::parse(epsilon);
  cfg.strict_theta = strict;
  return cfg;
}

/// Id of the named instance (e.g. "b3") within a dataset built from kInstances.
inline InstanceId id_of(const EventDataset& d, std::string_view name) {
  for (const auto& i : kInstances) {
    if (i.name != name) continue;
    const auto type = d.find_type(i.type);
    for (InstanceId id = 0; type && id < d.size(); ++id) {
      const auto& e = d.instance(id);
      if (e.type == *type && e.x == i.x && e.time == i.time) return id;
    }
  }
  throw std::invalid_argument("no fixture instance named " + std::string(name));
}

struct LatticeRow {
  std::string_view pattern;
  std::int64_t num;
  std::int64_t den;
};

/// The full PI > 0 lattice of the fixture. B->C and B->B->C are 3/8: a dataset
/// with PI(B->C) = 1/2 cannot also have PI(B->C->E) = 3/8, because
/// PI(B->C->E) = min(|I(B->C, 2)| / 8, k / 5).
inline constexpr std::array<LatticeRow, 26> kLattice{{
    {"A", 1, 1}, {"B", 1, 1}, {"C", 1, 1}, {"D", 1, 1}, {"E", 1, 1},
    {"A->B", 1, 2}, {"B->B", 5, 8}, {"B->C", 3, 8}, {"B->D", 1, 1}, {"C->E", 4, 5}, {"E->C", 1, 2},
    {"A->B->B", 1, 4}, {"A->B->C", 3, 8}, {"A->B->D", 1, 2}, {"B->B->C", 3, 8}, {"B->B->D", 1, 3},
    {"B->C->E", 3, 8}, {"C->E->C", 1, 4},
    {"A->B->B->C", 1, 4}, {"A->B->C->E", 3, 8}, {"B->B->C->E", 3, 8}, {"B->C->E->C", 1, 4},
    {"A->B->B->C->E", 1, 4}, {"A->B->C->E->C", 1, 4}, {"B->B->C->E->C", 1, 4},
    {"A->B->B->C->E->C", 1, 4},
}};

/// Every stated property the fixture must satisfy; returns human-readable violations.
inline std::vector<std::string> validate(const EventDataset& d) {
  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  const auto cfg = config("0");
  auto names = [&](const std::vector<InstanceId>& ids) {
    std::vector<std::string_view> out;
    for (auto id : ids) {
      for (const auto& i : kInstances) {
        if (id_of(d, i.name) == id) out.push_back(i.name);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  using V = std::vector<std::string_view>;
  const auto type = [&](std::string_view l) { return *d.find_type(l); };

  expect(d.size() == 26, "fixture must hold 26 instances");
  expect(names(oracle::naive_neighborhood(d, cfg, id_of(d, "a1"), type("B"))) == V{"b1", "b2"}, "N(a1,B) = {b1,b2}");
  expect(names(oracle::naive_neighborhood(d, cfg, id_of(d, "c1"), type("E"))) == V{"e1", "e2"}, "N(c1,E) = {e1,e2}");

  // Support sets of A->B->C, evaluated directly from the recursive definition.
  std::vector<InstanceId> support(d.by_type(type("A")).begin(), d.by_type(type("A")).end());
  expect(names(support) == V{"a1", "a2"}, "I(A->B->C,1) = {a1,a2}");
  for (std::string_view next : {"B", "C"}) {
    std::vector<InstanceId> grown;
    for (auto e : support) {
      for (auto p : oracle::naive_neighborhood(d, cfg, e, type(next))) grown.push_back(p);
    }
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    support = grown;
    if (next == "B") expect(names(support) == V{"b1", "b2", "b3", "b4"}, "I(A->B->C,2) = {b1..b4}");
    if (next == "C") expect(names(support) == V{"c1", "c2", "c3"}, "I(A->B->C,3) = {c1,c2,c3}");
  }

  const auto all = oracle::all_patterns(d, cfg, oracle::kMaxLength);
  expect(all.size() == kLattice.size(), "lattice must hold exactly 26 patterns with PI > 0, found " +
                                            std::to_string(all.size()));
  for (const auto& row : kLattice) {
    const auto p = parse_pattern(row.pattern, d);
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.pattern == p; });
    if (it == all.end()) {
      problems.push_back(std::string(row.pattern) + " missing");
    } else if (it->pi != Ratio(row.num, row.den)) {
      problems.push_back(std::string(row.pattern) + " has PI " + it->pi.str());
    }
  }
  return problems;
}

}  // namespace csts::fixture
