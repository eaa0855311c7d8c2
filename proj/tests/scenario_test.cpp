#include <gtest/gtest.h>

#include "support.hpp"

using namespace rcsp;
using rcsp::testing::box;
using rcsp::testing::make_scenario;

TEST(LoadScenario, Minimal) {
  const Scenario scn = load_scenario(R"({"start":[0,0],"end":[1,0],"budget":3})");
  EXPECT_EQ(scn.num_polytopes(), 0u);
  EXPECT_EQ(scn.levels, kDefaultLevels);
  EXPECT_EQ(scn.tol, kDefaultTol);
}

TEST(LoadScenario, HalfspaceAndVertexForms) {
  const Scenario scn = load_scenario(R"({"start":[0,0],"end":[10,0],"budget":3,"levels":2,
    "polytopes":[{"vertices":[[1,0],[2,0],[2,1],[1,1]]},
                 {"H":[[-1,0],[0,-1],[1,0],[0,1]],"h":[-4,1,6,1]}]})");
  ASSERT_EQ(scn.num_polytopes(), 2u);
  EXPECT_EQ(scn.levels, 2);
  EXPECT_EQ(scn.polytopes[1].vertices().size(), 4u);
  EXPECT_TRUE(contains(scn.polytopes[1], Point(5, 0)));
  EXPECT_FALSE(contains(scn.polytopes[1], Point(3.9, 0)));
}

TEST(LoadScenario, OverlapIsDisjointnessError) {
  try {
    load_scenario(R"({"start":[0,0],"end":[3,0],"budget":3,
      "polytopes":[{"vertices":[[0,0],[1,0],[1,1],[0,1]]},{"vertices":[[0.5,0],[1.5,0],[1.5,1],[0.5,1]]}]})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "disjointness");
  }
}

TEST(LoadScenario, TouchingRegionsRejected) {
  EXPECT_THROW(load_scenario(R"({"start":[0,0],"end":[3,0],"budget":3,
      "polytopes":[{"vertices":[[0,0],[1,0],[1,1],[0,1]]},{"vertices":[[1,0],[2,0],[2,1],[1,1]]}]})"),
               ValidationError);
}

TEST(LoadScenario, NamedInvariants) {
  const auto invariant_of = [](const char* text) -> std::string {
    try {
      load_scenario(text);
    } catch (const ValidationError& e) {
      return e.invariant();
    }
    return "none";
  };
  EXPECT_EQ(invariant_of(R"({"start":[0,0],"end":[1,0],"budget":0})"), "budget");
  EXPECT_EQ(invariant_of(R"({"start":[0,0],"end":[1,0],"budget":-2})"), "budget");
  EXPECT_EQ(invariant_of(R"({"start":[0,0],"end":[1,0],"budget":3,
      "polytopes":[{"H":[[-1,0],[0,-1],[1,0]],"h":[0,0,1]}]})"),
            "bounded polytope");
  EXPECT_EQ(invariant_of(R"({"start":[0,0],"end":[1,0],"budget":3,
      "polytopes":[{"H":[[-1,0],[0,-1],[1,0],[0,1]],"h":[-2,0,1,1]}]})"),
            "nonempty polytope");
}

TEST(LoadScenario, ParseErrors) {
  EXPECT_THROW(load_scenario("{not json"), ParseError);
  EXPECT_THROW(load_scenario(R"({"start":[0,0],"budget":3})"), ParseError);
  EXPECT_THROW(load_scenario(R"({"start":[0],"end":[1,0],"budget":3})"), ParseError);
  EXPECT_THROW(load_scenario(R"({"start":[0,0],"end":[1,0],"budget":"x"})"), ParseError);
}

TEST(LoadScenario, StartInsideRegionIsANote) {
  const Scenario scn = load_scenario(R"({"start":[0.5,0.5],"end":[5,0],"budget":3,
      "polytopes":[{"vertices":[[0,0],[1,0],[1,1],[0,1]]}]})");
  EXPECT_FALSE(scn.notes.empty());
}

TEST(SaveScenario, RoundTrip) {
  GeneratorOptions opt;
  opt.seed = 4;
  const Scenario a = generate_scenario(opt);
  const Scenario b = load_scenario(save_scenario(a));
  EXPECT_EQ(a.start, b.start);
  EXPECT_EQ(a.end, b.end);
  EXPECT_EQ(a.budget, b.budget);
  EXPECT_EQ(a.levels, b.levels);
  ASSERT_EQ(a.num_polytopes(), b.num_polytopes());
  for (std::size_t i = 0; i < a.num_polytopes(); ++i) {
    ASSERT_EQ(a.polytopes[i].vertices().size(), b.polytopes[i].vertices().size());
    for (std::size_t v = 0; v < a.polytopes[i].vertices().size(); ++v) {
      EXPECT_LE((a.polytopes[i].vertices()[v] - b.polytopes[i].vertices()[v]).norm(), 1e-12);
    }
    EXPECT_LE((a.polytopes[i].H() - b.polytopes[i].H()).norm(), 1e-12);
  }
  EXPECT_EQ(save_scenario(a), save_scenario(b));
}

TEST(SolutionJson, RoundTrip) {
  PathSolution sol;
  sol.waypoints = {Point(0, 0), Point(1.5, 0), Point(2.5, 0), Point(4, 0)};
  sol.segment_in_region = {false, true, false};
  sol.sequence.indices = {0};
  sol.method = SolutionMethod::refined;
  sol.recompute_lengths();
  const PathSolution back = solution_from_json(solution_to_json(sol));
  EXPECT_EQ(back.waypoints, sol.waypoints);
  EXPECT_EQ(back.segment_in_region, sol.segment_in_region);
  EXPECT_EQ(back.sequence, sol.sequence);
  EXPECT_EQ(back.method, SolutionMethod::refined);
  EXPECT_DOUBLE_EQ(back.total_length, 4.0);
}

namespace {

PathSolution polyline(std::vector<Point> pts, std::vector<bool> flags) {
  PathSolution s;
  s.waypoints = std::move(pts);
  s.segment_in_region = std::move(flags);
  s.recompute_lengths();
  return s;
}

}  // namespace

TEST(CheckPathFeasible, Examples) {
  EXPECT_TRUE(check_path_feasible(make_scenario(Point(0, 0), Point(2, 0), 3.0),
                                  polyline({Point(0, 0), Point(2, 0)}, {false})));
  EXPECT_FALSE(check_path_feasible(make_scenario(Point(0, 0), Point(4, 0), 3.0),
                                   polyline({Point(0, 0), Point(4, 0)}, {false})));
  EXPECT_TRUE(check_path_feasible(rcsp::testing::chord_scenario(),
                                  polyline({Point(0, 0), Point(1.5, 0), Point(2.5, 0), Point(4, 0)},
                                           {false, true, false})));
}

TEST(CheckPathFeasible, CrossingARegionResets) {
  // Straight line through the square: 1.5 + 1 + 1.5 with a reset inside.
  EXPECT_TRUE(check_path_feasible(rcsp::testing::chord_scenario(), polyline({Point(0, 0), Point(4, 0)}, {false})));
}

TEST(CheckPathFeasible, Rejections) {
  const Scenario scn = rcsp::testing::chord_scenario();
  // Wrong endpoints.
  EXPECT_FALSE(check_path_feasible(scn, polyline({Point(0, 0), Point(3, 0)}, {false})));
  // Interior flag on a segment that leaves the region.
  EXPECT_FALSE(check_path_feasible(scn, polyline({Point(0, 0), Point(1.5, 0), Point(4, 0)}, {false, true})));
  // Hops of exactly Q pass; one longer by more than tol does not.
  const Scenario far = make_scenario(Point(0, 0), Point(7, 0), 3.0, {box(3, -1, 4, 1)});
  EXPECT_TRUE(check_path_feasible(far, polyline({Point(0, 0), Point(3, 0), Point(4, 0), Point(7, 0)},
                                                {false, true, false})));
  const double eps = 1e-6;
  const Scenario tight = make_scenario(Point(0, 0), Point(7 + eps, 0), 3.0, {box(3, -1, 4, 1)});
  EXPECT_FALSE(check_path_feasible(
      tight, polyline({Point(0, 0), Point(3, 0), Point(4, 0), Point(7 + eps, 0)}, {false, true, false})));
}

TEST(StraightLine, Solution) {
  const Scenario scn = make_scenario(Point(0, 0), Point(2, 0), 3.0);
  const PathSolution s = straight_line_solution(scn);
  EXPECT_EQ(s.waypoints.size(), 2u);
  EXPECT_EQ(s.segment_in_region, std::vector<bool>{false});
  EXPECT_EQ(s.method, SolutionMethod::straight_line);
  EXPECT_DOUBLE_EQ(s.total_length, 2.0);
}
