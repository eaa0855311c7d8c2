#include <gtest/gtest.h>

#include "support.hpp"

using namespace rcsp;
using rcsp::testing::box;
using rcsp::testing::make_scenario;

TEST(DenseOracle, NoRegionsDirect) {
  const Scenario scn = make_scenario(Point(0, 0), Point(1, 2), 3.0);
  const auto r = dense_oracle(scn, 0.1);
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->length, std::sqrt(5.0));
  EXPECT_EQ(r->num_nodes, 2u);
}

TEST(DenseOracle, ChordWithinTwoHundredths) {
  const auto r = dense_oracle(rcsp::testing::chord_scenario(), 0.01);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->length, 4.0, 0.02);
  EXPECT_GE(r->length, 4.0 - 1e-12);
  EXPECT_EQ(r->sequence.indices, std::vector<int>{0});
}

TEST(DenseOracle, InfeasibleWhenIsolated) {
  const Scenario scn = make_scenario(Point(0, 0), Point(10, 0), 3.0, {box(4, -1, 6, 1)});
  EXPECT_FALSE(dense_oracle(scn, 0.05));
}

TEST(DenseOracle, HalvingSpacingNeverLonger) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GeneratorOptions opt;
    opt.count = 3;
    opt.xmax = 6;
    opt.ymax = 4;
    opt.corridor = 1.0;
    opt.seed = seed;
    const Scenario scn = generate_scenario(opt);
    const auto coarse = dense_oracle(scn, 0.04);
    const auto fine = dense_oracle(scn, 0.02);
    if (!coarse) continue;
    ASSERT_TRUE(fine);
    EXPECT_LE(fine->length, coarse->length);
  }
}

TEST(BoundarySamples, NestedUnderHalving) {
  const Scenario scn = make_scenario(Point(0, 0), Point(9, 0), 3.0,
                                     {Polytope::from_vertices({Point(2, 0), Point(3.3, 0.2), Point(2.4, 1.7)})});
  const auto coarse = boundary_samples(scn, 0.05);
  const auto fine = boundary_samples(scn, 0.025);
  for (const auto& [p, id] : coarse) {
    const bool found = std::any_of(fine.begin(), fine.end(), [&](const auto& q) { return (q.first - p).norm() < 1e-12; });
    EXPECT_TRUE(found);
  }
  for (const auto& [p, id] : fine) {
    EXPECT_EQ(id, 0);
    EXPECT_TRUE(contains(scn.polytopes[0], p, 1e-9));
  }
}

TEST(DenseOracle, NodeLimit) {
  EXPECT_THROW(dense_oracle(rcsp::testing::chord_scenario(), 1e-4, 1000), TooManyNodes);
}

TEST(DenseOracle, NeverBeatsPlanner) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorOptions opt;
    opt.count = 2;
    opt.xmax = 6;
    opt.ymax = 3;
    opt.corridor = 0.8;
    opt.seed = seed;
    const Scenario scn = generate_scenario(opt);
    const PlanResult plan_res = plan(scn);
    const auto oracle = dense_oracle(scn, 0.01);
    if (plan_res.status != PlanStatus::solved) continue;
    ASSERT_TRUE(oracle);
    if (oracle->sequence == plan_res.solution.sequence) {
      EXPECT_LE(plan_res.solution.total_length, oracle->length + 1e-6) << "seed " << seed;
    }
  }
}
