#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "csts/fixture.hpp"
#include "csts/neighborhood.hpp"
#include "csts/oracle.hpp"

using namespace csts;

namespace {

std::vector<InstanceId> as_vector(std::span<const InstanceId> s) { return {s.begin(), s.end()}; }

void expect_matches_naive(const EventDataset& d, const MiningConfig& cfg, const NeighborhoodIndex& idx) {
  for (InstanceId e = 0; e < d.size(); ++e) {
    for (const auto& t : d.types()) {
      ASSERT_EQ(as_vector(idx.neighborhood(e, t.id)), oracle::naive_neighborhood(d, cfg, e, t.id))
          << "instance " << e << " type " << t.label;
    }
  }
}

}  // namespace

TEST(Neighborhood, FixtureExamples) {
  const auto d = fixture::build_table1_fixture();
  const auto cfg = fixture::config("0");
  const auto idx = build_index(d, cfg);
  auto ids = [&](std::initializer_list<std::string_view> names) {
    std::vector<InstanceId> out;
    for (auto n : names) out.push_back(fixture::id_of(d, n));
    std::sort(out.begin(), out.end());
    return out;
  };
  EXPECT_EQ(as_vector(idx.neighborhood(fixture::id_of(d, "a1"), *d.find_type("B"))), ids({"b1", "b2"}));
  EXPECT_EQ(as_vector(idx.neighborhood(fixture::id_of(d, "c1"), *d.find_type("E"))), ids({"e1", "e2"}));
  // c4 is among the latest instances: nothing follows it within the window.
  EXPECT_TRUE(idx.all_neighbors(fixture::id_of(d, "c4")).empty());
  expect_matches_naive(d, cfg, idx);
}

TEST(Neighborhood, BoundariesAreInclusiveInSpaceAndHalfOpenInTime) {
  DatasetBuilder b;
  b.add("A", 0, 0, 0);
  b.add("B", 10, 0, 20);    // exactly R away, exactly T later: neighbor
  b.add("B", 10.001, 0, 5); // just beyond R
  b.add("B", 0, 0, 21);     // just beyond T
  b.add("B", 0, 0, 0);      // simultaneous: never a neighbor
  const auto d = std::move(b).build();
  auto cfg = fixture::config("0");
  const auto idx = build_index(d, cfg);
  const auto a = d.by_type(*d.find_type("A")).front();
  const auto n = idx.neighborhood(a, *d.find_type("B"));
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(d.instance(n.front()).time, 20);
  // Simultaneous pair in the other direction as well.
  const auto simultaneous_b = std::find_if(d.by_type(*d.find_type("B")).begin(), d.by_type(*d.find_type("B")).end(),
                                           [&](InstanceId id) { return d.instance(id).time == 0; });
  EXPECT_TRUE(idx.neighborhood(*simultaneous_b, *d.find_type("A")).empty());
}

TEST(Neighborhood, UnknownIdsAreErrors) {
  const auto d = fixture::build_table1_fixture();
  const auto idx = build_index(d, fixture::config("0"));
  EXPECT_THROW(idx.neighborhood(static_cast<InstanceId>(d.size()), 0), std::out_of_range);
  EXPECT_THROW(idx.neighborhood(0, 99), std::out_of_range);
}

TEST(Neighborhood, MatchesNaiveOnRandomPlanarData) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    std::mt19937_64 rng(seed);
    oracle::RandomSpec spec{seed, 1 + rng() % 5, rng() % 201, static_cast<std::int64_t>(10 + rng() % 90),
                            static_cast<std::int64_t>(rng() % 120)};
    const auto d = oracle::generate_random(spec);
    MiningConfig cfg;
    cfg.radius = 5 + static_cast<double>(rng() % 30);
    cfg.window = 1 + static_cast<std::int64_t>(rng() % 40);
    cfg.threads = 1 + seed % 4;
    expect_matches_naive(d, cfg, build_index(d, cfg));
  }
}

TEST(Neighborhood, MatchesNaiveOnRandomGeodesicData) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lon(-80.1, -79.8), lat(40.35, 40.55);
  for (int round = 0; round < 20; ++round) {
    DatasetBuilder b;
    for (int i = 0; i < 150; ++i) {
      b.add("T" + std::to_string(rng() % 4), lon(rng), lat(rng), static_cast<std::int64_t>(rng() % 2000));
    }
    const auto d = std::move(b).build();
    MiningConfig cfg;
    cfg.metric = Metric::kGeodesic;
    cfg.radius = 2000 + static_cast<double>(rng() % 6000);
    cfg.window = 300;
    cfg.threads = 3;
    expect_matches_naive(d, cfg, build_index(d, cfg));
  }
}

TEST(Neighborhood, IndependentOfThreadsAndInputPermutation) {
  const auto d = oracle::generate_random({77, 5, 500, 60, 300});
  MiningConfig cfg;
  cfg.radius = 9;
  cfg.window = 25;
  const auto base = build_index(d, cfg);
  for (unsigned threads : {2u, 3u, 8u}) {
    cfg.threads = threads;
    const auto idx = build_index(d, cfg);
    ASSERT_EQ(idx.pair_count(), base.pair_count());
    for (InstanceId e = 0; e < d.size(); ++e) {
      ASSERT_EQ(as_vector(idx.all_neighbors(e)), as_vector(base.all_neighbors(e)));
    }
  }
  // Rebuilding from shuffled rows yields the same canonical dataset, hence the same index.
  std::vector<EventInstance> rows(d.instances().begin(), d.instances().end());
  std::shuffle(rows.begin(), rows.end(), std::mt19937_64(1));
  DatasetBuilder b;
  for (const auto& r : rows) b.add(d.label(r.type), r.x, r.y, r.time);
  const auto shuffled = std::move(b).build();
  ASSERT_EQ(shuffled, d);
  cfg.threads = 1;
  const auto again = build_index(shuffled, cfg);
  for (InstanceId e = 0; e < d.size(); ++e) ASSERT_EQ(as_vector(again.all_neighbors(e)), as_vector(base.all_neighbors(e)));
}

TEST(Neighborhood, NeighborsStrictlyFollowInTime) {
  const auto d = oracle::generate_random({3, 4, 300, 40, 50});
  MiningConfig cfg;
  cfg.radius = 15;
  cfg.window = 10;
  const auto idx = build_index(d, cfg);
  for (InstanceId e = 0; e < d.size(); ++e) {
    for (auto p : idx.all_neighbors(e)) {
      const auto dt = d.instance(p).time - d.instance(e).time;
      ASSERT_GT(dt, 0);
      ASSERT_LE(dt, cfg.window);
      ASSERT_LE(euclidean_distance(d.instance(p), d.instance(e)), cfg.radius);
    }
  }
}

TEST(Neighborhood, EmptyDataset) {
  const auto d = DatasetBuilder{}.build();
  const auto idx = build_index(d, fixture::config("0"));
  EXPECT_EQ(idx.instance_count(), 0u);
  EXPECT_EQ(idx.pair_count(), 0u);
}
