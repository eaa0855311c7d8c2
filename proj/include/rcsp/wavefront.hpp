#pragma once

// Candidate node generation: circles of radius jQ/levels around every seed
// point are intersected with the polytope boundaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rcsp/geometry.hpp"
#include "rcsp/scenario.hpp"

namespace rcsp {

inline constexpr double kNodeMergeRadius = 1e-7;

enum class NodeOrigin { start, end, vertex_seed, wavefront };

struct CandidateNode {
  Point position;
  // Polytope whose boundary hosts the node; empty for start and end.
  std::optional<int> polytope_id;
  NodeOrigin origin = NodeOrigin::wavefront;
  // Wavefront level j in 1..levels and index into seed_points(); 0 / -1 for seeds.
  int level = 0;
  int seed_index = -1;
};

namespace detail {

// Spatial hash for merging points closer than a fixed radius.
class PointMerger {
 public:
  explicit PointMerger(double radius) : radius_(radius), cell_(4.0 * radius) {}

  // Returns false if a stored point lies within the radius of p.
  bool insert(const Point& p) {
    const auto cx = cell_coord(p.x());
    const auto cy = cell_coord(p.y());
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (const auto& q : it->second) {
          if ((q - p).norm() <= radius_) return false;
        }
      }
    }
    cells_[key(cx, cy)].push_back(p);
    return true;
  }

 private:
  std::int64_t cell_coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(y);
  }

  double radius_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Point>> cells_;
};

}  // namespace detail

/// Start, end and every polytope vertex, deduplicated within the scenario tol.
inline std::vector<Point> seed_points(const Scenario& scn) {
  std::vector<Point> seeds;
  detail::push_unique(seeds, scn.start, scn.tol);
  detail::push_unique(seeds, scn.end, scn.tol);
  for (const auto& P : scn.polytopes) {
    for (const auto& v : P.vertices()) detail::push_unique(seeds, v, scn.tol);
  }
  return seeds;
}

/// Builds the candidate node set. Nodes 0 and 1 are always the start and end
/// points; the remaining nodes are polytope vertices followed by the wavefront
/// intersections in (level, seed, polytope, angle) order, merged within
/// kNodeMergeRadius. Seeds are never extended: only the initial seed list
/// emits circles.
inline std::vector<CandidateNode> generate_candidates(const Scenario& scn) {
  std::vector<CandidateNode> nodes;
  detail::PointMerger merger(kNodeMergeRadius);

  nodes.push_back({scn.start, std::nullopt, NodeOrigin::start, 0, -1});
  nodes.push_back({scn.end, std::nullopt, NodeOrigin::end, 0, -1});
  merger.insert(scn.start);
  merger.insert(scn.end);

  for (std::size_t i = 0; i < scn.polytopes.size(); ++i) {
    for (const auto& v : scn.polytopes[i].vertices()) {
      if (merger.insert(v)) nodes.push_back({v, static_cast<int>(i), NodeOrigin::vertex_seed, 0, -1});
    }
  }

  const std::vector<Point> seeds = seed_points(scn);
  std::vector<std::pair<double, Point>> hits;
  for (int j = 1; j <= scn.levels; ++j) {
    // Q * (j / levels) depends only on the ratio, so nested level sets give
    // bit-identical radii.
    const double radius = scn.budget * (static_cast<double>(j) / static_cast<double>(scn.levels));
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const Point& seed = seeds[s];
      for (std::size_t i = 0; i < scn.polytopes.size(); ++i) {
        const Polytope& P = scn.polytopes[i];
        if (contains(P, seed, scn.tol)) continue;
        hits.clear();
        for (const auto& p : circle_boundary_intersections(P, seed, radius, scn.tol)) {
          hits.emplace_back(std::atan2(p.y() - seed.y(), p.x() - seed.x()), p);
        }
        std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [angle, p] : hits) {
          if (merger.insert(p)) {
            nodes.push_back({p, static_cast<int>(i), NodeOrigin::wavefront, j, static_cast<int>(s)});
          }
        }
      }
    }
  }
  return nodes;
}

}  // namespace rcsp
