#pragma once

// Shared fixtures and reference implementations for the test binaries.

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "rcsp/rcsp.hpp"

namespace rcsp::testing {

inline Polytope box(double x0, double y0, double x1, double y1) {
  return Polytope::from_vertices({Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)});
}

inline Scenario make_scenario(Point start, Point end, double budget, std::vector<Polytope> polys = {},
                              int levels = kDefaultLevels) {
  Scenario scn;
  scn.start = start;
  scn.end = end;
  scn.budget = budget;
  scn.levels = levels;
  scn.polytopes = std::move(polys);
  validate_scenario(scn);
  return scn;
}

// x_S=(0,0), x_E=(4,0), Q=3 with the square [1.5,2.5]x[-0.5,0.5].
inline Scenario chord_scenario() {
  return make_scenario(Point(0, 0), Point(4, 0), 3.0, {box(1.5, -0.5, 2.5, 0.5)});
}

inline Scenario scaled(const Scenario& scn, double s) {
  Scenario out = scn;
  out.start = s * scn.start;
  out.end = s * scn.end;
  out.budget = s * scn.budget;
  out.polytopes.clear();
  for (const auto& P : scn.polytopes) {
    std::vector<Point> v;
    for (const auto& p : P.vertices()) v.push_back(s * p);
    out.polytopes.push_back(Polytope::from_vertices(v, scn.tol));
  }
  return out;
}

// Bellman-Ford over (distance, hops) labels compared lexicographically. The
// predecessor is recomputed afterwards as the smallest index achieving the
// label, which is the tie-break the planner promises.
struct BellmanFordResult {
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<int> path;  // empty when unreachable
};

inline BellmanFordResult bellman_ford(const Adjacency& adj, int source, int target) {
  const std::size_t n = adj.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr int kNoHops = std::numeric_limits<int>::max();
  BellmanFordResult r{std::vector<double>(n, kInf), std::vector<int>(n, kNoHops), {}};
  r.dist[static_cast<std::size_t>(source)] = 0.0;
  r.hops[static_cast<std::size_t>(source)] = 0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (r.hops[u] == kNoHops) continue;
      for (const auto& e : adj[u]) {
        const auto v = static_cast<std::size_t>(e.to);
        const double nd = r.dist[u] + e.weight;
        const int nh = r.hops[u] + 1;
        if (nd < r.dist[v] || (nd == r.dist[v] && nh < r.hops[v])) {
          r.dist[v] = nd;
          r.hops[v] = nh;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  if (r.hops[static_cast<std::size_t>(target)] == kNoHops) return r;

  // Reverse adjacency so predecessors can be found per node.
  std::vector<std::vector<std::pair<int, double>>> incoming(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& e : adj[u]) incoming[static_cast<std::size_t>(e.to)].emplace_back(static_cast<int>(u), e.weight);
  }
  int v = target;
  r.path.push_back(v);
  while (v != source) {
    const auto sv = static_cast<std::size_t>(v);
    int best = -1;
    for (const auto& [u, w] : incoming[sv]) {
      const auto su = static_cast<std::size_t>(u);
      if (r.hops[su] == kNoHops) continue;
      if (r.dist[su] + w == r.dist[sv] && r.hops[su] + 1 == r.hops[sv] && (best == -1 || u < best)) best = u;
    }
    if (best == -1) return {};  // cannot happen for a consistent labelling
    v = best;
    r.path.push_back(v);
  }
  std::reverse(r.path.begin(), r.path.end());
  return r;
}

// Random directed graph with optional integer weights (forces exact ties).
inline Adjacency random_graph(std::mt19937_64& rng, int n, double density, bool integer_weights) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Adjacency adj(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || unit(rng) > density) continue;
      const double w = integer_weights ? std::floor(unit(rng) * 4.0) : unit(rng) * 10.0;
      adj[static_cast<std::size_t>(u)].push_back({v, w, false});
    }
  }
  return adj;
}

// Feasible-perturbation probe around a refined optimum. Returns the largest
// objective decrease found over coordinate and random joint moves of size
// `step` that keep every constraint satisfied.
inline double best_perturbation_gain(const ConicProblem& prob, const RefineResult& res, double step,
                                     std::uint64_t seed = 7) {
  const double base = chain_objective(prob, res.entry_points, res.exit_points);
  const double allowed = std::max(0.0, max_constraint_violation(prob, res.entry_points, res.exit_points));
  const int k = prob.num_regions();
  const int n = prob.dim();
  double gain = 0.0;
  const auto probe = [&](const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
    if (max_constraint_violation(prob, a, b) > allowed) return;
    gain = std::max(gain, base - chain_objective(prob, a, b));
  };

  for (int var = 0; var < 2 * k; ++var) {
    for (int c = 0; c < n; ++c) {
      for (double sign : {-1.0, 1.0}) {
        auto a = res.entry_points;
        auto b = res.exit_points;
        auto& p = (var % 2 == 0) ? a[static_cast<std::size_t>(var / 2)] : b[static_cast<std::size_t>(var / 2)];
        p(c) += sign * step;
        probe(a, b);
      }
    }
  }
  // Slides along active facets in the plane; axis moves alone are usually
  // infeasible for points sitting on a boundary.
  if (n == 2) {
    for (const auto& blk : prob.linear_blocks) {
      const auto chain = chain_points(prob, res.entry_points, res.exit_points);
      const Eigen::VectorXd& x = chain[static_cast<std::size_t>(blk.variable) + 1];
      for (Eigen::Index r = 0; r < blk.H.rows(); ++r) {
        if (blk.H.row(r).dot(x) - blk.h(r) < -1e-6) continue;
        const Eigen::Vector2d t(-blk.H(r, 1), blk.H(r, 0));
        for (double sign : {-1.0, 1.0}) {
          auto a = res.entry_points;
          auto b = res.exit_points;
          const auto i = static_cast<std::size_t>(blk.variable / 2);
          auto& p = (blk.variable % 2 == 0) ? a[i] : b[i];
          p += sign * step * t / t.norm();
          probe(a, b);
        }
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd dir(2 * k * n);
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
    dir *= step / dir.norm();
    auto a = res.entry_points;
    auto b = res.exit_points;
    for (int i = 0; i < k; ++i) {
      a[static_cast<std::size_t>(i)] += dir.segment(2 * i * n, n);
      b[static_cast<std::size_t>(i)] += dir.segment((2 * i + 1) * n, n);
    }
    probe(a, b);
  }
  return gain;
}

}  // namespace rcsp::testing
