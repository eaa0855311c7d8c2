#pragma once

// Exact entry/exit points for a fixed visitation sequence.
//
// For a sequence (s_1..s_k) the path is the chain
//   start -> a_1 -> b_1 -> a_2 -> ... -> b_k -> end
// with a_i, b_i in polytope s_i. The objective is the chain length, and
// every hop between regions (start->a_1, b_i->a_{i+1}, b_k->end) is bounded
// by the budget. Hops inside a region are unconstrained. The program is a
// second-order cone program and is solved with the barrier method in
// detail/socp.hpp after normalizing coordinates by the budget.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rcsp/detail/socp.hpp"
#include "rcsp/geometry.hpp"
#include "rcsp/scenario.hpp"

namespace rcsp {

class InvalidSequence : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sum-of-norms program over 2k points in R^n. Variable 2i is the entry
/// point of the i-th visited region and 2i+1 its exit point. Chain position
/// 0 is the fixed start, 1..2k the variables and 2k+1 the fixed end.
struct ConicProblem {
  struct LinearBlock {
    int variable = 0;
    Eigen::MatrixXd H;
    Eigen::VectorXd h;
  };
  struct NormBound {
    int from = 0;  // chain positions
    int to = 0;
    double bound = 0.0;
  };

  Eigen::VectorXd start;
  Eigen::VectorXd end;
  double budget = 0.0;
  PolytopeSequence sequence;
  std::vector<LinearBlock> linear_blocks;
  std::vector<NormBound> soc_constraints;

  int dim() const { return static_cast<int>(start.size()); }
  int num_regions() const { return static_cast<int>(sequence.size()); }
  int num_variables() const { return 2 * num_regions(); }
  int num_objective_terms() const { return 2 * num_regions() + 1; }

  std::size_t num_linear_rows() const {
    std::size_t rows = 0;
    for (const auto& b : linear_blocks) rows += static_cast<std::size_t>(b.H.rows());
    return rows;
  }
};

/// Builds the program from per-region half-spaces given in visitation order.
inline ConicProblem make_conic_problem(Eigen::VectorXd start, Eigen::VectorXd end, double budget,
                                       PolytopeSequence sequence, const std::vector<Eigen::MatrixXd>& H,
                                       const std::vector<Eigen::VectorXd>& h) {
  if (sequence.empty()) throw InvalidSequence("sequence must visit at least one region");
  if (H.size() != sequence.size() || h.size() != sequence.size()) {
    throw InvalidSequence("one half-space block is required per visited region");
  }
  ConicProblem prob;
  prob.start = std::move(start);
  prob.end = std::move(end);
  prob.budget = budget;
  prob.sequence = std::move(sequence);
  const int k = prob.num_regions();
  for (int i = 0; i < k; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (H[si].cols() != prob.dim() || H[si].rows() != h[si].size()) {
      throw InvalidSequence("half-space block dimensions do not match");
    }
    prob.linear_blocks.push_back({2 * i, H[si], h[si]});
    prob.linear_blocks.push_back({2 * i + 1, H[si], h[si]});
  }
  // Hops between regions: chain positions (0,1), (2,3), ..., (2k,2k+1).
  for (int i = 0; i <= k; ++i) prob.soc_constraints.push_back({2 * i, 2 * i + 1, budget});
  return prob;
}

inline ConicProblem assemble_problem(const Scenario& scn, const PolytopeSequence& seq) {
  std::vector<Eigen::MatrixXd> H;
  std::vector<Eigen::VectorXd> h;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int idx = seq.indices[i];
    if (idx < 0 || static_cast<std::size_t>(idx) >= scn.num_polytopes()) {
      throw InvalidSequence("sequence entry " + std::to_string(idx) + " is out of range");
    }
    if (std::find(seq.indices.begin(), seq.indices.begin() + static_cast<std::ptrdiff_t>(i), idx) !=
        seq.indices.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw InvalidSequence("sequence repeats region " + std::to_string(idx));
    }
    const auto& P = scn.polytopes[static_cast<std::size_t>(idx)];
    H.emplace_back(P.H());
    h.emplace_back(P.h());
  }
  return make_conic_problem(scn.start, scn.end, scn.budget, seq, H, h);
}

enum class RefineStatus { optimal, infeasible, max_iterations };

inline const char* to_string(RefineStatus s) {
  switch (s) {
    case RefineStatus::optimal:
      return "optimal";
    case RefineStatus::infeasible:
      return "infeasible";
    case RefineStatus::max_iterations:
      return "max_iterations";
  }
  return "unknown";
}

struct RefineResult {
  std::vector<Eigen::VectorXd> entry_points;
  std::vector<Eigen::VectorXd> exit_points;
  double objective_value = 0.0;
  RefineStatus status = RefineStatus::infeasible;
  int solver_iterations = 0;
  double kkt_residual = 0.0;
};

struct WarmStart {
  std::vector<Eigen::VectorXd> entry_points;
  std::vector<Eigen::VectorXd> exit_points;
};

/// feastol is absolute in scenario units. gaptol is relative to the budget:
/// an optimal result is within gaptol * budget of the optimum, which keeps
/// the solve invariant under uniform scaling of the scenario.
struct SolverOptions {
  double feastol = 1e-7;
  double gaptol = 1e-7;
  int max_iter = 50000;
};

/// Chain points start, a_1, b_1, ..., b_k, end.
inline std::vector<Eigen::VectorXd> chain_points(const ConicProblem& prob, const std::vector<Eigen::VectorXd>& entry,
                                                 const std::vector<Eigen::VectorXd>& exit) {
  std::vector<Eigen::VectorXd> chain{prob.start};
  for (std::size_t i = 0; i < entry.size(); ++i) {
    chain.push_back(entry[i]);
    chain.push_back(exit[i]);
  }
  chain.push_back(prob.end);
  return chain;
}

/// Chain length at the given entry/exit points.
inline double chain_objective(const ConicProblem& prob, const std::vector<Eigen::VectorXd>& entry,
                              const std::vector<Eigen::VectorXd>& exit) {
  const auto chain = chain_points(prob, entry, exit);
  double total = 0.0;
  for (std::size_t i = 1; i < chain.size(); ++i) total += (chain[i] - chain[i - 1]).norm();
  return total;
}

/// Largest violation of the budget and membership constraints (<= 0 when feasible).
inline double max_constraint_violation(const ConicProblem& prob, const std::vector<Eigen::VectorXd>& entry,
                                       const std::vector<Eigen::VectorXd>& exit) {
  const auto chain = chain_points(prob, entry, exit);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : prob.soc_constraints) {
    const auto from = static_cast<std::size_t>(s.from), to = static_cast<std::size_t>(s.to);
    worst = std::max(worst, (chain[to] - chain[from]).norm() - s.bound);
  }
  for (const auto& b : prob.linear_blocks) {
    worst = std::max(worst, (b.H * chain[static_cast<std::size_t>(b.variable) + 1] - b.h).maxCoeff());
  }
  return worst;
}

namespace detail {

// Moves p along the segment from `from` towards p to the first point of the
// region {Hx <= h}; the resulting chain is never longer.
inline Eigen::VectorXd first_point_in_region(const Eigen::MatrixXd& H, const Eigen::VectorXd& h,
                                             const Eigen::VectorXd& from, const Eigen::VectorXd& p) {
  const Eigen::VectorXd d = p - from;
  double lo = 0.0;
  for (Eigen::Index r = 0; r < H.rows(); ++r) {
    const double den = H.row(r).dot(d);
    const double num = h(r) - H.row(r).dot(from);
    if (den < 0.0) lo = std::max(lo, num / den);
  }
  if (!(lo < 1.0)) return p;
  return from + lo * d;
}

// Scaled problem data: y = (x - origin) / scale.
struct NormalizedProblem {
  Eigen::VectorXd origin;
  double scale = 1.0;
  int n = 0;
  int k = 0;
  Eigen::VectorXd start, end;
  std::vector<Eigen::MatrixXd> H;  // per linear block, rows unit length
  std::vector<Eigen::VectorXd> h;
  std::vector<int> block_var;
};

inline NormalizedProblem normalize(const ConicProblem& prob) {
  NormalizedProblem np;
  np.origin = prob.start;
  np.scale = prob.budget;
  np.n = prob.dim();
  np.k = prob.num_regions();
  np.start = Eigen::VectorXd::Zero(np.n);
  np.end = (prob.end - np.origin) / np.scale;
  for (const auto& b : prob.linear_blocks) {
    Eigen::MatrixXd H = b.H;
    Eigen::VectorXd h = (b.h - b.H * np.origin) / np.scale;
    for (Eigen::Index r = 0; r < H.rows(); ++r) {
      const double nr = H.row(r).norm();
      if (nr > 0.0) {
        H.row(r) /= nr;
        h(r) /= nr;
      }
    }
    np.H.push_back(std::move(H));
    np.h.push_back(std::move(h));
    np.block_var.push_back(b.variable);
  }
  return np;
}

// Selector matrix for chain position `pos` minus chain position `from` in
// the point variables; fixed endpoints go into the offset.
inline void hop_affine(const NormalizedProblem& np, Eigen::Index num_vars, int from, int to, Eigen::MatrixXd& A,
                       Eigen::VectorXd& b) {
  A = Eigen::MatrixXd::Zero(np.n, num_vars);
  b = Eigen::VectorXd::Zero(np.n);
  const int last = 2 * np.k + 1;
  const auto place = [&](int pos, double sign) {
    if (pos == 0) {
      b += sign * np.start;
    } else if (pos == last) {
      b += sign * np.end;
    } else {
      A.block(0, (pos - 1) * np.n, np.n, np.n) += sign * Eigen::MatrixXd::Identity(np.n, np.n);
    }
  };
  place(to, 1.0);
  place(from, -1.0);
}

inline void add_linear_blocks(const NormalizedProblem& np, Eigen::Index num_vars, Eigen::MatrixXd& G,
                              Eigen::VectorXd& g, bool with_slack_column) {
  Eigen::Index rows = 0;
  for (const auto& H : np.H) rows += H.rows();
  G = Eigen::MatrixXd::Zero(rows, num_vars);
  g = Eigen::VectorXd::Zero(rows);
  Eigen::Index r = 0;
  for (std::size_t b = 0; b < np.H.size(); ++b) {
    const auto m = np.H[b].rows();
    G.block(r, np.block_var[b] * np.n, m, np.n) = np.H[b];
    if (with_slack_column) G.block(r, num_vars - 1, m, 1).setConstant(-1.0);
    g.segment(r, m) = np.h[b];
    r += m;
  }
}

}  // namespace detail

/// Solves the program. Feasibility is established by a phase-one barrier
/// solve (minimize a uniform constraint relaxation s); a positive optimal s
/// certifies that some hop cannot be made within budget and the result is
/// reported infeasible. Entry and exit points of the optimum are finally
/// pulled onto the region boundary along the path, which never lengthens it.
inline RefineResult solve(const ConicProblem& prob, const std::optional<WarmStart>& warm = std::nullopt,
                          const SolverOptions& opts = {}) {
  if (!(opts.feastol > 0.0) || !(opts.gaptol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (prob.num_regions() == 0) throw InvalidSequence("sequence must visit at least one region");

  const detail::NormalizedProblem np = detail::normalize(prob);
  const int n = np.n, k = np.k;
  const Eigen::Index num_points = 2 * k * n;
  const int last = 2 * k + 1;

  RefineResult result;
  const auto finish_points = [&](const Eigen::VectorXd& y) {
    result.entry_points.clear();
    result.exit_points.clear();
    for (int i = 0; i < k; ++i) {
      result.entry_points.push_back(np.origin + np.scale * y.segment(2 * i * n, n));
      result.exit_points.push_back(np.origin + np.scale * y.segment((2 * i + 1) * n, n));
    }
    result.objective_value = chain_objective(prob, result.entry_points, result.exit_points);
  };

  // Initial points in normalized coordinates.
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(num_points + 1);
  if (warm && warm->entry_points.size() == static_cast<std::size_t>(k) &&
      warm->exit_points.size() == static_cast<std::size_t>(k)) {
    for (int i = 0; i < k; ++i) {
      y0.segment(2 * i * n, n) = (warm->entry_points[static_cast<std::size_t>(i)] - np.origin) / np.scale;
      y0.segment((2 * i + 1) * n, n) = (warm->exit_points[static_cast<std::size_t>(i)] - np.origin) / np.scale;
    }
  }

  // Phase one over (points, s).
  detail::Socp phase1;
  const Eigen::Index n1 = num_points + 1;
  phase1.c = Eigen::VectorXd::Zero(n1);
  phase1.c(n1 - 1) = 1.0;
  detail::add_linear_blocks(np, n1, phase1.G, phase1.g, true);
  for (const auto& s : prob.soc_constraints) {
    detail::SocCone cone;
    detail::hop_affine(np, n1, s.from, s.to, cone.A, cone.b);
    cone.e = Eigen::VectorXd::Zero(n1);
    cone.e(n1 - 1) = 1.0;
    cone.f = s.bound / np.scale;
    phase1.cones.push_back(std::move(cone));
  }
  y0(n1 - 1) = 0.0;
  y0(n1 - 1) = phase1.max_violation(y0) + 1.0;

  detail::BarrierOptions p1opt;
  p1opt.gap_target = 1e-10;
  p1opt.max_newton = opts.max_iter;
  constexpr double kPhaseOneMargin = 1e-4;
  const auto p1 = detail::barrier_solve(phase1, y0, p1opt,
                                        [&](const Eigen::VectorXd& y) { return y(n1 - 1) < -kPhaseOneMargin; });
  result.solver_iterations = p1.newton_iterations;
  if (p1.non_finite || !p1.x.allFinite()) throw NumericalBreakdown("phase-one iterate is not finite");
  if (p1.exhausted) {
    finish_points(p1.x);
    result.status = RefineStatus::max_iterations;
    return result;
  }

  const double s_star = p1.x(n1 - 1);
  const double feastol_n = opts.feastol / np.scale;
  // Each hop can gain at most 3s from a uniform relaxation (two polytopes and
  // the cone itself), so s > feastol/3 means some hop exceeds the budget by
  // more than feastol.
  if (s_star > feastol_n / 3.0) {
    finish_points(p1.x);
    result.status = RefineStatus::infeasible;
    return result;
  }
  // Budget and membership constraints are relaxed only when the feasible set
  // has (numerically) no interior.
  const double relax = s_star < -1e-12 ? 0.0 : std::max(s_star, 0.0) + 1e-3 * feastol_n / 3.0;

  // Phase two over (points, epigraph t_0..t_2k).
  detail::Socp phase2;
  const Eigen::Index n2 = num_points + (2 * k + 1);
  phase2.c = Eigen::VectorXd::Zero(n2);
  phase2.c.tail(2 * k + 1).setOnes();
  detail::add_linear_blocks(np, n2, phase2.G, phase2.g, false);
  phase2.g.array() += relax;
  for (int j = 0; j < last; ++j) {
    detail::SocCone cone;
    detail::hop_affine(np, n2, j, j + 1, cone.A, cone.b);
    cone.e = Eigen::VectorXd::Zero(n2);
    cone.e(num_points + j) = 1.0;
    phase2.cones.push_back(std::move(cone));
  }
  for (const auto& s : prob.soc_constraints) {
    detail::SocCone cone;
    detail::hop_affine(np, n2, s.from, s.to, cone.A, cone.b);
    cone.e = Eigen::VectorXd::Zero(n2);
    cone.f = s.bound / np.scale + relax;
    phase2.cones.push_back(std::move(cone));
  }
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n2);
  x0.head(num_points) = p1.x.head(num_points);
  for (int j = 0; j < last; ++j) {
    const auto& cone = phase2.cones[static_cast<std::size_t>(j)];
    x0(num_points + j) = (cone.A * x0 + cone.b).norm() + 1.0;
  }

  detail::BarrierOptions p2opt;
  p2opt.gap_target = opts.gaptol;
  p2opt.max_newton = std::max(1, opts.max_iter - p1.newton_iterations);
  p2opt.t0 = phase2.barrier_degree() / std::max(1.0, phase2.c.dot(x0));
  const auto p2 = detail::barrier_solve(phase2, x0, p2opt);
  result.solver_iterations += p2.newton_iterations;
  result.kkt_residual = p2.kkt_residual;
  if (p2.non_finite || !p2.x.allFinite()) throw NumericalBreakdown("barrier iterate is not finite");

  // Pull each entry point back along the incoming segment, and each exit
  // point forward along the outgoing segment, to the region boundary.
  Eigen::VectorXd y = p2.x.head(num_points);
  for (int i = 0; i < k; ++i) {
    const Eigen::MatrixXd& H = np.H[static_cast<std::size_t>(2 * i)];
    const Eigen::VectorXd& h = np.h[static_cast<std::size_t>(2 * i)];
    const Eigen::VectorXd prev = i == 0 ? np.start : Eigen::VectorXd(y.segment((2 * i - 1) * n, n));
    const Eigen::VectorXd next = i == k - 1 ? np.end : Eigen::VectorXd(y.segment((2 * i + 2) * n, n));
    const Eigen::VectorXd hr = h.array() + relax;
    y.segment(2 * i * n, n) = detail::first_point_in_region(H, hr, prev, y.segment(2 * i * n, n));
    y.segment((2 * i + 1) * n, n) = detail::first_point_in_region(H, hr, next, y.segment((2 * i + 1) * n, n));
  }
  finish_points(y);
  result.status = p2.converged ? RefineStatus::optimal : RefineStatus::max_iterations;
  return result;
}

/// Turns an optimal result into a path: start, a_1, b_1, ..., b_k, end with
/// the a_i -> b_i segments tagged as in-region.
inline PathSolution assemble_solution(const Scenario& scn, const PolytopeSequence& seq, const RefineResult& result) {
  PathSolution sol;
  sol.method = seq.empty() ? SolutionMethod::straight_line : SolutionMethod::refined;
  sol.sequence = seq;
  sol.waypoints.push_back(scn.start);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    sol.waypoints.emplace_back(result.entry_points[i].head<2>());
    sol.waypoints.emplace_back(result.exit_points[i].head<2>());
    sol.segment_in_region.push_back(false);
    sol.segment_in_region.push_back(true);
  }
  sol.waypoints.push_back(scn.end);
  sol.segment_in_region.push_back(false);
  sol.recompute_lengths();
  return sol;
}

}  // namespace rcsp
