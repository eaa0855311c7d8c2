#pragma once

// Resource-constrained graph over candidate nodes, Dijkstra search and
// extraction of the polytope visitation sequence.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rcsp/geometry.hpp"
#include "rcsp/scenario.hpp"
#include "rcsp/wavefront.hpp"

namespace rcsp {

struct Edge {
  int to = 0;
  double weight = 0.0;
  bool exempt = false;  // both endpoints in the same polytope
};

using Adjacency = std::vector<std::vector<Edge>>;

/// Edge rule shared by the planner graph and the dense oracle: an edge
/// exists when its length is within budget, or unconditionally when both
/// endpoints belong to the same polytope.
struct EdgeRule {
  double budget;

  std::optional<Edge> operator()(const Point& u, std::optional<int> region_u, const Point& v,
                                 std::optional<int> region_v, int to) const {
    const double w = (u - v).norm();
    const bool exempt = region_u && region_v && *region_u == *region_v;
    if (!exempt && w > budget) return std::nullopt;
    return Edge{to, w, exempt};
  }
};

class BudgetGraph {
 public:
  BudgetGraph() = default;
  BudgetGraph(std::vector<CandidateNode> nodes, std::vector<std::optional<int>> regions, Adjacency adj,
              double budget)
      : nodes_(std::move(nodes)), regions_(std::move(regions)), adj_(std::move(adj)), budget_(budget) {}

  const std::vector<CandidateNode>& nodes() const { return nodes_; }
  const CandidateNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  // Polytope containing node i (closed sets, scenario tol).
  std::optional<int> region(int i) const { return regions_[static_cast<std::size_t>(i)]; }
  const Adjacency& adjacency() const { return adj_; }
  double budget() const { return budget_; }
  std::size_t num_nodes() const { return nodes_.size(); }

  std::size_t num_edges() const {
    std::size_t n = 0;
    for (const auto& out : adj_) n += out.size();
    return n / 2;
  }

 private:
  std::vector<CandidateNode> nodes_;
  std::vector<std::optional<int>> regions_;
  Adjacency adj_;
  double budget_ = 0.0;
};

/// Connects every pair of nodes admitted by EdgeRule. O(|V|^2).
inline BudgetGraph build_graph(const Scenario& scn, std::vector<CandidateNode> nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::optional<int>> regions(n);
  for (std::size_t i = 0; i < n; ++i) regions[i] = scn.region_of(nodes[i].position);

  const EdgeRule rule{scn.budget};
  Adjacency adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (auto e = rule(nodes[u].position, regions[u], nodes[v].position, regions[v], static_cast<int>(v))) {
        adj[u].push_back(*e);
        adj[v].push_back({static_cast<int>(u), e->weight, e->exempt});
      }
    }
  }
  return BudgetGraph(std::move(nodes), std::move(regions), std::move(adj), scn.budget);
}

struct GraphPath {
  std::vector<int> nodes;
  double length = 0.0;
};

/// Dijkstra over nonnegative weights. Labels are compared as (distance, hop
/// count); among equally good predecessors the smallest node index wins, so
/// the returned path is unique and platform independent. Returns nullopt when
/// the target is unreachable.
template <class Graph>
std::optional<GraphPath> dijkstra(const Graph& adj, int source, int target) {
  const std::size_t n = adj.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<int> hops(n, std::numeric_limits<int>::max());
  std::vector<int> pred(n, -1);
  std::vector<char> settled(n, 0);

  using Label = std::tuple<double, int, int>;  // (dist, hops, node)
  std::priority_queue<Label, std::vector<Label>, std::greater<>> queue;
  dist[static_cast<std::size_t>(source)] = 0.0;
  hops[static_cast<std::size_t>(source)] = 0;
  queue.emplace(0.0, 0, source);

  while (!queue.empty()) {
    const auto [d, h, u] = queue.top();
    queue.pop();
    const auto su = static_cast<std::size_t>(u);
    if (settled[su]) continue;
    settled[su] = 1;
    if (u == target) break;
    for (const auto& e : adj[su]) {
      const auto sv = static_cast<std::size_t>(e.to);
      if (settled[sv]) continue;
      const double nd = d + e.weight;
      const int nh = h + 1;
      const bool better = nd < dist[sv] || (nd == dist[sv] && nh < hops[sv]);
      const bool tie = nd == dist[sv] && nh == hops[sv] && u < pred[sv];
      if (better) {
        dist[sv] = nd;
        hops[sv] = nh;
        pred[sv] = u;
        queue.emplace(nd, nh, e.to);
      } else if (tie) {
        pred[sv] = u;
      }
    }
  }

  const auto st = static_cast<std::size_t>(target);
  if (!settled[st]) return std::nullopt;
  GraphPath path;
  path.length = dist[st];
  for (int v = target; v != -1; v = pred[static_cast<std::size_t>(v)]) path.nodes.push_back(v);
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

/// Shortest budget-feasible node path; nullopt means no feasible path exists
/// for this candidate set.
inline std::optional<GraphPath> shortest_graph_path(const BudgetGraph& g, int source, int target) {
  return dijkstra(g.adjacency(), source, target);
}

class SequenceRepetition : public std::runtime_error {
 public:
  explicit SequenceRepetition(int id)
      : std::runtime_error("polytope " + std::to_string(id) + " is visited twice along the path") {}
};

struct SequenceExtraction {
  PolytopeSequence sequence;
  // First and last path node on each visited polytope; warm start for refinement.
  std::vector<Point> entry_guess;
  std::vector<Point> exit_guess;
};

/// Collapses a node path to its polytope visitation order. Start and end
/// nodes are skipped; `region_of_node` maps a path node to its polytope.
template <class RegionFn, class PositionFn>
SequenceExtraction extract_sequence(const std::vector<int>& path, RegionFn region_of_node,
                                    PositionFn position_of_node) {
  SequenceExtraction out;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k == 0 || k + 1 == path.size()) continue;
    const std::optional<int> r = region_of_node(path[k]);
    if (!r) continue;
    const Point p = position_of_node(path[k]);
    auto& seq = out.sequence.indices;
    if (!seq.empty() && seq.back() == *r) {
      out.exit_guess.back() = p;
      continue;
    }
    if (std::find(seq.begin(), seq.end(), *r) != seq.end()) throw SequenceRepetition(*r);
    seq.push_back(*r);
    out.entry_guess.push_back(p);
    out.exit_guess.push_back(p);
  }
  return out;
}

inline SequenceExtraction extract_sequence(const BudgetGraph& g, const GraphPath& path) {
  return extract_sequence(
      path.nodes, [&](int i) { return g.region(i); }, [&](int i) { return g.node(i).position; });
}

/// Graph-only solution: the node path itself as a polyline.
inline PathSolution graph_solution(const BudgetGraph& g, const GraphPath& path, PolytopeSequence sequence) {
  PathSolution sol;
  sol.method = SolutionMethod::graph_only;
  for (int v : path.nodes) sol.waypoints.push_back(g.node(v).position);
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    const auto a = g.region(path.nodes[k - 1]);
    const auto b = g.region(path.nodes[k]);
    sol.segment_in_region.push_back(a && b && *a == *b);
  }
  sol.sequence = std::move(sequence);
  sol.recompute_lengths();
  return sol;
}

/// {"nodes":[[x,y,polytope|null],...],"edges":[[u,v,w,exempt],...]}
inline nlohmann::json graph_to_json(const BudgetGraph& g) {
  nlohmann::json j;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const auto& n = g.nodes()[i];
    const auto r = g.region(static_cast<int>(i));
    nodes.push_back({n.position.x(), n.position.y(), r ? nlohmann::json(*r) : nlohmann::json(nullptr)});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    for (const auto& e : g.adjacency()[u]) {
      if (static_cast<std::size_t>(e.to) > u) edges.push_back({u, e.to, e.weight, e.exempt});
    }
  }
  return j;
}

}  // namespace rcsp
