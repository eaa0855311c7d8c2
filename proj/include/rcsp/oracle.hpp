#pragma once

// Brute-force reference: polytope boundaries sampled at a fixed arc-length
// spacing, connected with the planner's edge rule and searched with a dense
// O(V^2) Dijkstra. Halving the spacing yields a superset of nodes, so the
// reported length never increases under refinement.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcsp/budget_graph.hpp"
#include "rcsp/scenario.hpp"

namespace rcsp {

class TooManyNodes : public std::runtime_error {
 public:
  TooManyNodes(std::size_t needed, std::size_t limit)
      : std::runtime_error("oracle needs " + std::to_string(needed) + " nodes, limit is " + std::to_string(limit)) {}
};

inline constexpr std::size_t kDefaultOracleNodeLimit = 20000;

struct OracleResult {
  double length = 0.0;
  std::vector<Point> path;
  PolytopeSequence sequence;
  std::size_t num_nodes = 0;
};

/// Nodes on polytope boundaries every `spacing` of arc length, starting at
/// vertex 0 and running counter-clockwise. Vertices are always included.
inline std::vector<std::pair<Point, int>> boundary_samples(const Scenario& scn, double spacing) {
  std::vector<std::pair<Point, int>> out;
  for (std::size_t p = 0; p < scn.polytopes.size(); ++p) {
    const Polytope& P = scn.polytopes[p];
    double arc_start = 0.0;
    for (std::size_t e = 0; e < P.vertices().size(); ++e) {
      const Segment edge = P.edge(e);
      const double len = edge.length();
      out.emplace_back(edge.start, static_cast<int>(p));
      // Samples at i * spacing strictly inside this edge.
      auto i = static_cast<long long>(std::floor(arc_start / spacing)) + 1;
      for (;; ++i) {
        const double s = static_cast<double>(i) * spacing;
        if (s >= arc_start + len) break;
        if (s <= arc_start) continue;
        const double t = (s - arc_start) / len;
        out.emplace_back(edge.start + t * (edge.end - edge.start), static_cast<int>(p));
      }
      arc_start += len;
    }
  }
  return out;
}

/// Shortest path over the dense sample graph, or nullopt when start and end
/// are disconnected. Throws TooManyNodes above `max_nodes`.
inline std::optional<OracleResult> dense_oracle(const Scenario& scn, double spacing,
                                                std::size_t max_nodes = kDefaultOracleNodeLimit) {
  if (!(spacing > 0.0)) throw std::invalid_argument("oracle spacing must be positive");
  double total_perimeter = 0.0;
  for (const auto& P : scn.polytopes) total_perimeter += P.perimeter();
  std::size_t estimate = 2;
  for (const auto& P : scn.polytopes) estimate += P.vertices().size();
  estimate += static_cast<std::size_t>(total_perimeter / spacing);
  if (estimate > max_nodes) throw TooManyNodes(estimate, max_nodes);

  std::vector<Point> pos{scn.start, scn.end};
  std::vector<std::optional<int>> region{scn.region_of(scn.start), scn.region_of(scn.end)};
  for (const auto& [p, id] : boundary_samples(scn, spacing)) {
    pos.push_back(p);
    region.emplace_back(id);
  }
  if (pos.size() > max_nodes) throw TooManyNodes(pos.size(), max_nodes);

  const std::size_t n = pos.size();
  const EdgeRule rule{scn.budget};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);
  dist[0] = 0.0;
  for (;;) {
    std::size_t u = n;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && dist[i] < best) {
        best = dist[i];
        u = i;
      }
    }
    if (u == n || u == 1) break;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const auto e = rule(pos[u], region[u], pos[v], region[v], static_cast<int>(v));
      if (e && dist[u] + e->weight < dist[v]) {
        dist[v] = dist[u] + e->weight;
        pred[v] = static_cast<int>(u);
      }
    }
  }
  if (!std::isfinite(dist[1])) return std::nullopt;

  OracleResult res;
  res.length = dist[1];
  res.num_nodes = n;
  std::vector<int> nodes;
  for (int v = 1; v != -1; v = pred[static_cast<std::size_t>(v)]) nodes.push_back(v);
  std::reverse(nodes.begin(), nodes.end());
  for (int v : nodes) res.path.push_back(pos[static_cast<std::size_t>(v)]);
  res.sequence = extract_sequence(
                     nodes, [&](int i) { return region[static_cast<std::size_t>(i)]; },
                     [&](int i) { return pos[static_cast<std::size_t>(i)]; })
                     .sequence;
  return res;
}

}  // namespace rcsp
