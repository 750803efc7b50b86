#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "csts/core.hpp"
#include "csts/fixture.hpp"
#include "csts/topdown.hpp"

using namespace csts;

namespace {

const EventDataset& abcde() {
  static const EventDataset d = [] {
    DatasetBuilder b;
    for (auto l : {"E", "C", "A", "D", "B"}) b.declare_type(l);
    return std::move(b).build();
  }();
  return d;
}

Pattern P(std::string_view text) { return parse_pattern(text, abcde()); }

bool brute_force_contains(const Pattern& outer, const Pattern& inner) {
  for (std::size_t k = 0; k + inner.length() <= outer.length(); ++k) {
    bool all = true;
    for (std::size_t i = 0; i < inner.length(); ++i) all = all && inner[i] == outer[i + k];
    if (all) return true;
  }
  return false;
}

Pattern random_pattern(std::mt19937_64& rng, std::size_t max_len, std::size_t types) {
  std::vector<TypeId> e(1 + rng() % max_len);
  for (auto& x : e) x = static_cast<TypeId>(rng() % types);
  return Pattern(std::move(e));
}

}  // namespace

TEST(Supersequence, Examples) {
  EXPECT_TRUE(is_supersequence(P("A->B->C->E"), P("A->B")));
  EXPECT_TRUE(is_supersequence(P("A->B->C"), P("A->B->C")));
  EXPECT_FALSE(is_supersequence(P("A->B->C"), P("A->C")));
  EXPECT_TRUE(is_proper_supersequence(P("A->B->B->C->E->C"), P("B->C->E")));
  EXPECT_FALSE(is_proper_supersequence(P("A->B->C"), P("A->B->C")));
  EXPECT_TRUE(is_proper_supersequence(P("B->B->C->E->C"), P("B->B")));
  EXPECT_FALSE(is_supersequence(P("A->B"), P("A->B->C")));
}

TEST(Supersequence, AgreesWithOffsetScanOnAllShortPairs) {
  // Every pattern over 3 types up to length 5, all pairs.
  std::vector<Pattern> all;
  std::vector<TypeId> cur;
  auto rec = [&](auto&& self) -> void {
    if (!cur.empty()) all.emplace_back(cur);
    if (cur.size() == 5) return;
    for (TypeId t = 0; t < 3; ++t) {
      cur.push_back(t);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  for (const auto& a : all) {
    for (const auto& b : all) {
      ASSERT_EQ(is_supersequence(a, b), brute_force_contains(a, b));
      ASSERT_EQ(is_proper_supersequence(a, b), brute_force_contains(a, b) && a.length() > b.length());
    }
  }
}

TEST(Supersequence, RandomPairsUpToLengthEight) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto a = random_pattern(rng, 8, 3), b = random_pattern(rng, 4, 3);
    ASSERT_EQ(is_supersequence(a, b), brute_force_contains(a, b));
  }
}

TEST(Supersequence, ReflexiveTransitiveAndProperIrreflexive) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const auto c = random_pattern(rng, 3, 2);
    // Build b ⊇ c and a ⊇ b by padding on either side so transitivity is exercised.
    auto pad = [&](const Pattern& p) {
      std::vector<TypeId> e(p.elements().begin(), p.elements().end());
      for (auto n = rng() % 3; n > 0; --n) e.insert(e.begin(), static_cast<TypeId>(rng() % 5));
      for (auto n = rng() % 3; n > 0; --n) e.push_back(static_cast<TypeId>(rng() % 5));
      return Pattern(std::move(e));
    };
    const auto b = pad(c), a = pad(b);
    ASSERT_TRUE(is_supersequence(c, c));
    ASSERT_FALSE(is_proper_supersequence(c, c));
    ASSERT_TRUE(is_supersequence(b, c));
    ASSERT_TRUE(is_supersequence(a, c));
    if (is_proper_supersequence(a, b) && is_proper_supersequence(b, c)) {
      ASSERT_TRUE(is_proper_supersequence(a, c));
    }
    const auto x = random_pattern(rng, 8, 5), y = random_pattern(rng, 8, 5), z = random_pattern(rng, 8, 5);
    if (is_supersequence(x, y) && is_supersequence(y, z)) {
      ASSERT_TRUE(is_supersequence(x, z));
    }
  }
}

TEST(CanonicalOrder, Examples) {
  EXPECT_LT(P("A->B"), P("B->A"));
  EXPECT_GT(P("A->B->C"), P("E->C"));
  std::vector<Pattern> l2{P("E->C"), P("B->D"), P("C->E"), P("B->B"), P("A->B"), P("B->C")};
  std::sort(l2.begin(), l2.end());
  std::vector<std::string> got;
  for (const auto& p : l2) got.push_back(to_string(p, abcde()));
  EXPECT_EQ(got, (std::vector<std::string>{"A->B", "B->B", "B->C", "B->D", "C->E", "E->C"}));
}

TEST(Dataset, TypeIdsAreLabelSortedAndDense) {
  const auto& d = abcde();
  ASSERT_EQ(d.types().size(), 5u);
  for (TypeId i = 0; i < 5; ++i) EXPECT_EQ(d.types()[i].id, i);
  EXPECT_EQ(d.label(0), "A");
  EXPECT_EQ(d.label(4), "E");
  EXPECT_FALSE(d.find_type("F").has_value());
}

TEST(Dataset, ByTypePartitionsInstances) {
  const auto d = fixture::build_table1_fixture();
  std::size_t total = 0;
  for (const auto& t : d.types()) {
    for (auto id : d.by_type(t.id)) EXPECT_EQ(d.instance(id).type, t.id);
    total += d.by_type(t.id).size();
  }
  EXPECT_EQ(total, d.size());
  EXPECT_EQ(d.by_type(*d.find_type("B")).size(), 8u);
}

TEST(Dataset, InstancesAreCanonicallyOrderedRegardlessOfInsertionOrder) {
  std::vector<std::tuple<std::string, double, double, std::int64_t>> rows;
  for (const auto& i : fixture::kInstances) rows.emplace_back(std::string(i.type), i.x, 0.0, i.time);
  std::mt19937_64 rng(3);
  const auto reference = fixture::build_table1_fixture();
  for (int round = 0; round < 20; ++round) {
    std::shuffle(rows.begin(), rows.end(), rng);
    DatasetBuilder b;
    for (const auto& [l, x, y, t] : rows) b.add(l, x, y, t);
    ASSERT_EQ(std::move(b).build(), reference);
  }
  EXPECT_TRUE(std::is_sorted(reference.instances().begin(), reference.instances().end(), canonical_instance_less));
}

TEST(Dataset, RejectsInvalidInstances) {
  DatasetBuilder b;
  EXPECT_THROW(b.add("A", 0, 0, -1), std::invalid_argument);
  EXPECT_THROW(b.add("A", std::nan(""), 0, 0), std::invalid_argument);
}

TEST(Pattern, ParseRejectsUnknownLabels) {
  EXPECT_THROW(parse_pattern("A->Z", abcde()), std::invalid_argument);
  EXPECT_EQ(to_string(P("C->E->C"), abcde()), "C->E->C");
}

TEST(MiningConfig, Validation) {
  auto cfg = fixture::config("0.2");
  EXPECT_NO_THROW(cfg.validate());
  cfg.theta = Ratio::integer(1);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = fixture::config("0.2", "1");
  EXPECT_NO_THROW(cfg.validate());
  cfg.epsilon = Ratio::parse("1.01");
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = fixture::config("0");
  cfg.radius = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = fixture::config("0");
  cfg.window = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = fixture::config("0");
  cfg.max_length = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(MiningConfig, Strictness) {
  auto cfg = fixture::config("0.25");
  EXPECT_FALSE(cfg.passes_theta(Ratio(1, 4)));
  EXPECT_TRUE(cfg.passes_theta(Ratio(3, 8)));
  cfg.strict_theta = false;
  EXPECT_TRUE(cfg.passes_theta(Ratio(1, 4)));
}

TEST(Ratio, ParsesDecimalsExactly) {
  EXPECT_EQ(Ratio::parse("0.25"), Ratio(1, 4));
  EXPECT_EQ(Ratio::parse(".5"), Ratio(1, 2));
  EXPECT_EQ(Ratio::parse("3/8"), Ratio(3, 8));
  EXPECT_EQ(Ratio::parse("0.005"), Ratio(1, 200));
  EXPECT_EQ(Ratio::parse("1"), Ratio::integer(1));
  EXPECT_EQ(Ratio(6, 16).str(), "3/8");
  EXPECT_LT(Ratio(1, 3), Ratio(334, 1000));
  EXPECT_EQ(Ratio(3, 8) + Ratio(1, 4), Ratio(5, 8));
  EXPECT_THROW(Ratio::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Ratio::parse("1/0"), std::invalid_argument);
}

TEST(MaxTreeStructure, ParentsAreTheTwoMaximalSubsequences) {
  const auto d = fixture::build_table1_fixture();
  const auto tree = mine_all(d, fixture::config("0"));
  for (const auto& n : tree.nodes()) {
    if (n.pattern.length() < 2) {
      EXPECT_EQ(n.parent1, kNoNode);
      continue;
    }
    const auto& p1 = tree.node(n.parent1).pattern;
    const auto& p2 = tree.node(n.parent2).pattern;
    EXPECT_TRUE(is_proper_supersequence(n.pattern, p1));
    EXPECT_TRUE(is_proper_supersequence(n.pattern, p2));
    EXPECT_TRUE(std::equal(p1.elements().begin(), p1.elements().end(), n.pattern.elements().begin()));
    EXPECT_TRUE(std::equal(p2.elements().begin(), p2.elements().end(), n.pattern.elements().begin() + 1));
  }
}
