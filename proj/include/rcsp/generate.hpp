#pragma once

// Random benchmark scenarios: disjoint convex polygons with vertices on
// circles of random radius, start and end at opposite corners of the bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcsp/geometry.hpp"
#include "rcsp/scenario.hpp"

namespace rcsp {

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorOptions {
  int count = 15;
  double xmin = 0.0, ymin = 0.0, xmax = 18.0, ymax = 14.0;
  double budget = 3.0;
  int levels = kDefaultLevels;
  std::uint64_t seed = 1;
  double min_radius = 0.5;
  double max_radius = 1.5;
  int min_vertices = 3;
  int max_vertices = 8;
  // Minimum gap between polygons.
  double clearance = 0.1;
  // When positive, centers are drawn within this distance of the start-end
  // segment instead of uniformly over the bounds.
  double corridor = 3.0;
  int max_rejections = 10000;
};

namespace detail {

// mt19937_64 output is fixed by the standard; the distribution adaptors are
// not, so the mapping to [0, 1) is done by hand.
class ScenarioRng {
 public:
  explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace detail

/// Samples `count` pairwise-disjoint polygons by rejection. Deterministic for
/// a fixed seed. Throws GenerationFailed after max_rejections rejected draws.
inline Scenario generate_scenario(const GeneratorOptions& opt) {
  if (opt.count < 0) throw std::invalid_argument("polytope count must be >= 0");
  if (!(opt.xmax > opt.xmin) || !(opt.ymax > opt.ymin)) throw std::invalid_argument("empty bounds");
  if (!(opt.min_radius > 0.0) || opt.max_radius < opt.min_radius) throw std::invalid_argument("bad radius range");
  if (opt.min_vertices < 3 || opt.max_vertices < opt.min_vertices) throw std::invalid_argument("bad vertex range");

  Scenario scn;
  scn.start = Point(opt.xmin, opt.ymin);
  scn.end = Point(opt.xmax, opt.ymax);
  scn.budget = opt.budget;
  scn.levels = opt.levels;

  detail::ScenarioRng rng(opt.seed);
  int rejections = 0;
  const auto reject = [&](const char* why) {
    if (++rejections >= opt.max_rejections) {
      throw GenerationFailed("gave up after " + std::to_string(rejections) + " rejections (last: " + why + ")");
    }
  };

  while (static_cast<int>(scn.polytopes.size()) < opt.count) {
    const double radius = rng.uniform(opt.min_radius, opt.max_radius);
    Point center;
    if (opt.corridor > 0.0) {
      const Point axis = scn.end - scn.start;
      const Point normal = Point(-axis.y(), axis.x()).normalized();
      const double along = rng.uniform();
      const double across = rng.uniform(-opt.corridor, opt.corridor);
      center = scn.start + along * axis + across * normal;
    } else {
      center = Point(rng.uniform(opt.xmin, opt.xmax), rng.uniform(opt.ymin, opt.ymax));
    }
    const int nv = rng.integer(opt.min_vertices, opt.max_vertices);
    std::vector<double> angles(static_cast<std::size_t>(nv));
    for (auto& a : angles) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());

    // Every gap below pi keeps the center inside; a floor on the gap keeps
    // the polygon away from slivers.
    double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
    double min_gap = max_gap;
    for (std::size_t i = 1; i < angles.size(); ++i) {
      max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
      min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
    }
    if (max_gap >= 0.9 * std::numbers::pi || min_gap < 0.15) {
      reject("poorly shaped polygon");
      continue;
    }

    std::vector<Point> verts;
    for (double a : angles) {
      verts.emplace_back(detail::round6(center.x() + radius * std::cos(a)),
                         detail::round6(center.y() + radius * std::sin(a)));
    }
    Polytope P = Polytope::from_vertices(verts, scn.tol);
    if (P.vertices().size() != verts.size()) {
      reject("vertices not in convex position");
      continue;
    }
    const bool clear = std::all_of(scn.polytopes.begin(), scn.polytopes.end(), [&](const Polytope& Q) {
      return polytope_distance(P, Q) > opt.clearance;
    });
    if (!clear) {
      reject("overlap");
      continue;
    }
    scn.polytopes.push_back(std::move(P));
  }
  validate_scenario(scn);
  return scn;
}

}  // namespace rcsp
