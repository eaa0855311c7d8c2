#pragma once

// End-to-end pipeline: straight line when the budget allows it, otherwise
// wavefront candidates -> budget graph -> Dijkstra -> visitation sequence ->
// conic refinement.

#include <chrono>
#include <optional>
#include <string>

#include "rcsp/budget_graph.hpp"
#include "rcsp/refine.hpp"
#include "rcsp/scenario.hpp"
#include "rcsp/wavefront.hpp"

namespace rcsp {

struct PlanOptions {
  std::optional<int> levels;
  std::optional<double> tol;
  SolverOptions solver;
  bool keep_graph = false;
};

enum class PlanStatus { solved, infeasible, solver_failure };

struct PlanResult {
  PlanStatus status = PlanStatus::infeasible;
  std::string message;
  // Final answer: refined, or the straight line when it is within budget.
  PathSolution solution;
  std::optional<PathSolution> graph_solution;
  std::optional<RefineResult> refine;
  std::optional<BudgetGraph> graph;  // only with PlanOptions::keep_graph
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  double graph_ms = 0.0;
  double refine_ms = 0.0;
};

inline Scenario apply_overrides(Scenario scn, const PlanOptions& opts) {
  if (opts.levels) scn.levels = *opts.levels;
  if (opts.tol) scn.tol = *opts.tol;
  if (scn.levels < 1) throw ValidationError("levels", "levels must be at least 1");
  return scn;
}

inline PlanResult plan(const Scenario& input, const PlanOptions& opts = {}) {
  using Clock = std::chrono::steady_clock;
  const auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };
  const Scenario scn = apply_overrides(input, opts);
  PlanResult out;

  if ((scn.end - scn.start).norm() <= scn.budget) {
    out.status = PlanStatus::solved;
    out.solution = straight_line_solution(scn);
    return out;
  }

  const auto t_graph = Clock::now();
  BudgetGraph g = build_graph(scn, generate_candidates(scn));
  out.num_nodes = g.num_nodes();
  out.num_edges = g.num_edges();
  const auto path = shortest_graph_path(g, 0, 1);
  out.graph_ms = ms_since(t_graph);
  if (!path) {
    out.status = PlanStatus::infeasible;
    out.message = "infeasible: no budget-feasible path";
    if (opts.keep_graph) out.graph = std::move(g);
    return out;
  }

  SequenceExtraction ex = extract_sequence(g, *path);
  out.graph_solution = graph_solution(g, *path, ex.sequence);

  if (ex.sequence.empty()) {
    // Start and end share a region: the chord inside it is optimal.
    out.status = PlanStatus::solved;
    out.solution = straight_line_solution(scn);
    out.solution.segment_in_region = out.graph_solution->segment_in_region;
    if (opts.keep_graph) out.graph = std::move(g);
    return out;
  }

  const auto t_refine = Clock::now();
  WarmStart warm;
  for (std::size_t i = 0; i < ex.sequence.size(); ++i) {
    warm.entry_points.emplace_back(ex.entry_guess[i]);
    warm.exit_points.emplace_back(ex.exit_guess[i]);
  }
  const ConicProblem prob = assemble_problem(scn, ex.sequence);
  RefineResult res = solve(prob, warm, opts.solver);
  out.refine_ms = ms_since(t_refine);
  if (res.status != RefineStatus::optimal) {
    out.status = PlanStatus::solver_failure;
    out.message = std::string("refinement failed: ") + to_string(res.status);
    out.solution = *out.graph_solution;
    out.refine = std::move(res);
    if (opts.keep_graph) out.graph = std::move(g);
    return out;
  }
  out.status = PlanStatus::solved;
  out.solution = assemble_solution(scn, ex.sequence, res);
  out.refine = std::move(res);
  if (opts.keep_graph) out.graph = std::move(g);
  return out;
}

}  // namespace rcsp
