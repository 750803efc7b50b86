#include <gtest/gtest.h>

#include "csts/bottomup.hpp"
#include "csts/fixture.hpp"
#include "support.hpp"

using namespace csts;

namespace {

const EventDataset& fx() {
  static const EventDataset d = fixture::build_table1_fixture();
  return d;
}

Pattern P(std::string_view s) { return parse_pattern(s, fx()); }

std::vector<std::string> cmax_names(const MaxTree& t, std::string_view p) {
  std::vector<std::string> out;
  for (auto c : t.node(*t.find(P(p))).cmax) out.push_back(to_string(t.node(c).pattern, fx()));
  return out;
}

MaxTree mined(std::string_view theta, std::string_view eps, bool strict = true) {
  const auto cfg = fixture::config(theta, eps, strict);
  auto tree = mine_all(fx(), cfg);
  run_bottom_up(tree, cfg.epsilon);
  return tree;
}

}  // namespace

TEST(BottomUp, WorkedExamples) {
  EXPECT_EQ(cmax_names(mined("0.2", "0.25"), "B->B"), (std::vector<std::string>{"B->B->C->E"}));
  EXPECT_EQ(cmax_names(mined("0.2", "0.1"), "B->C->E"), (std::vector<std::string>{"A->B->C->E", "B->B->C->E"}));
}

TEST(BottomUp, ReverseSetOfTheLongestPattern) {
  const auto tree = mined("0.2", "0.25");
  const auto& top = tree.node(*tree.find(P("A->B->B->C->E->C")));
  std::set<std::string> rc;
  for (auto r : top.rcmax) rc.insert(to_string(tree.node(r).pattern, fx()));
  for (auto listed : {"A->B->B->C->E", "B->B->C->E->C", "A->B->B->C", "B->B->C->E", "B->C->E->C", "A->B->B",
                      "B->B->C", "B->C->E", "A->B", "B->C", "E->C"}) {
    EXPECT_TRUE(rc.count(listed)) << listed;
  }
  EXPECT_TRUE(top.cmax.empty());
}

TEST(BottomUp, DeepestLevelIsItsOwnCsts) {
  auto tree = mined("0.2", "0.25");
  extract_csts(tree);
  for (auto id : tree.level(tree.depth())) {
    EXPECT_TRUE(tree.node(id).cmax.empty());
    EXPECT_EQ(tree.node(id).csts_flag, CstsFlag::kCsts);
  }
}

TEST(BottomUp, SingleLevelTreeIsANoOp) {
  auto cfg = fixture::config("0.2");
  cfg.max_length = 1;
  auto tree = mine_all(fx(), cfg);
  ASSERT_EQ(tree.depth(), 1u);
  run_bottom_up(tree, Ratio(1, 4));
  EXPECT_EQ(extract_csts(tree).size(), 5u);
}

TEST(BottomUp, MarginGateLeavesStateUntouched) {
  auto tree = mine_all(fx(), fixture::config("0.2"));
  const auto s = *tree.find(P("A->B->B->C->E->C"));  // 1/4
  verify_supersequence(tree, s, *tree.find(P("B")), Ratio(1, 2));
  EXPECT_TRUE(tree.node(*tree.find(P("B"))).cmax.empty());
  EXPECT_TRUE(tree.node(s).rcmax.empty());
  // With enough margin the same call reaches B and its (empty) ancestry.
  verify_supersequence(tree, s, *tree.find(P("B")), Ratio(3, 4));
  EXPECT_EQ(tree.node(*tree.find(P("B"))).cmax, std::vector<NodeId>{s});
}

TEST(BottomUp, ExtractBeforeBottomUpIsAnError) {
  auto tree = mine_all(fx(), fixture::config("0.2"));
  EXPECT_THROW(extract_csts(tree), std::logic_error);
}

TEST(BottomUp, CstsAtTheFigureConfiguration) {
  auto tree = mined("0.25", "0.25", false);
  const auto got = csts::testing::names(csts::testing::scored(tree, extract_csts(tree)), fx());
  const auto cfg = fixture::config("0.25", "0.25", false);
  const auto expected =
      csts::testing::names(csts::testing::scored(oracle::csts(oracle::all_patterns(fx(), cfg, 8), cfg.epsilon)), fx());
  EXPECT_EQ(got, expected);
  EXPECT_EQ(got, (std::vector<std::string>{"A", "B->D", "C->E", "A->B->D", "B->B->D", "B->B->C->E",
                                           "A->B->C->E->C", "A->B->B->C->E->C"}));
}

TEST(BottomUp, MatchesOracleCmaxOnRandomData) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto d = oracle::generate_random({seed, 3, 35, 40, 120});
    for (auto eps : {"0", "0.05", "0.25", "1"}) {
      auto cfg = fixture::config("0.1", eps);
      cfg.radius = 20;
      cfg.window = 40;
      cfg.max_length = 7;
      auto tree = mine_all(d, cfg);
      run_bottom_up(tree, cfg.epsilon);
      const auto all = oracle::all_patterns(d, cfg, 7);
      ASSERT_EQ(csts::testing::cmax_of(tree), oracle::cmax_sets(all, cfg.epsilon)) << seed << " eps " << eps;
    }
  }
}

TEST(BottomUp, RerunningWithAnotherMarginResetsState) {
  const auto cfg = fixture::config("0.2");
  auto tree = mine_all(fx(), cfg);
  run_bottom_up(tree, Ratio(1, 4));
  const auto first = extract_csts(tree);
  run_bottom_up(tree, Ratio(1, 10));
  run_bottom_up(tree, Ratio(1, 4));
  EXPECT_EQ(extract_csts(tree), first);
}
