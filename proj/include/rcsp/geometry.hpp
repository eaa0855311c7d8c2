#pragma once

// Planar convex-polytope primitives used throughout the planner.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rcsp {

using Point = Eigen::Vector2d;
using HalfspaceMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

inline constexpr double kDefaultTol = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedPolytope : public GeometryError {
 public:
  UnboundedPolytope() : GeometryError("unbounded polytope: a recession direction exists") {}
};

class EmptyPolytope : public GeometryError {
 public:
  EmptyPolytope() : GeometryError("empty polytope: no point satisfies all half-spaces") {}
};

class DegeneratePolytope : public GeometryError {
 public:
  DegeneratePolytope() : GeometryError("degenerate polytope: feasible set has empty interior") {}
};

inline bool is_finite(const Point& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Segment {
  Point start;
  Point end;

  double length() const { return (end - start).norm(); }
};

namespace detail {

// Shoelace area of a CCW-ordered ring.
inline double ring_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    twice += cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * twice;
}

inline Point mean_point(std::span<const Point> pts) {
  Point c = Point::Zero();
  for (const auto& p : pts) c += p;
  return pts.empty() ? c : Point(c / static_cast<double>(pts.size()));
}

// Merge radius used for vertex and intersection dedup. A zero tol still needs
// to absorb round-off between intersections computed from different edges.
inline double merge_radius(double tol, const Point& p) {
  return std::max(tol, 1e-12 * (1.0 + p.lpNorm<Eigen::Infinity>()));
}

inline void push_unique(std::vector<Point>& out, const Point& p, double tol) {
  for (const auto& q : out) {
    if ((q - p).norm() <= merge_radius(tol, p)) return;
  }
  out.push_back(p);
}

// A set {Hx <= h} in the plane is bounded iff its outward normals leave no
// angular gap of pi or more.
inline bool normals_positively_span(const HalfspaceMatrix& H) {
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(H.rows()));
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    if (H.row(i).norm() == 0.0) continue;
    angles.push_back(std::atan2(H(i, 1), H(i, 0)));
  }
  if (angles.size() < 3) return false;
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
  }
  return max_gap < std::numbers::pi - 1e-12;
}

inline void sort_ccw(std::vector<Point>& pts) {
  const Point c = mean_point(pts);
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
    return std::atan2(a.y() - c.y(), a.x() - c.x()) < std::atan2(b.y() - c.y(), b.x() - c.x());
  });
}

// Andrew's monotone chain; returns the hull in CCW order without collinear points.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

inline bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const auto orient = [](const Point& a, const Point& b, const Point& c) {
    const double v = cross(b - a, c - a);
    return (v > 0) - (v < 0);
  };
  const auto on_segment = [](const Point& a, const Point& b, const Point& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace detail

/// Enumerates the vertices of {x : Hx <= h} by intersecting every pair of
/// constraint lines and keeping the feasible intersections. The result is
/// deduplicated within tol and sorted counter-clockwise around its centroid.
///
/// Throws UnboundedPolytope, EmptyPolytope or DegeneratePolytope when the set
/// is not a bounded region with nonempty interior.
inline std::vector<Point> enumerate_vertices(const HalfspaceMatrix& H, const Eigen::VectorXd& h,
                                             double tol = kDefaultTol) {
  if (H.rows() != h.size()) throw std::invalid_argument("H and h row counts differ");
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    if (H.row(i).norm() == 0.0 && h(i) < -tol) throw EmptyPolytope();
  }
  if (!detail::normals_positively_span(H)) throw UnboundedPolytope();

  std::vector<Point> vertices;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < H.rows(); ++j) {
      Eigen::Matrix2d A;
      A << H.row(i), H.row(j);
      const double det = A.determinant();
      if (std::abs(det) <= 1e-14 * A.norm() * A.norm()) continue;
      const Point v = A.inverse() * Eigen::Vector2d(h(i), h(j));
      if (!is_finite(v)) continue;
      const Eigen::VectorXd slack = H * v - h;
      if (slack.maxCoeff() <= std::max(tol, 1e-12 * (1.0 + v.lpNorm<Eigen::Infinity>()))) {
        detail::push_unique(vertices, v, tol);
      }
    }
  }
  if (vertices.empty()) throw EmptyPolytope();
  detail::sort_ccw(vertices);
  if (vertices.size() < 3 || detail::ring_area(vertices) < tol * tol) throw DegeneratePolytope();
  return vertices;
}

/// A bounded convex polygon kept in both half-space and vertex form. Rows of
/// H are normalized to unit length, so constraint slack is a distance.
class Polytope {
 public:
  static Polytope from_halfspaces(HalfspaceMatrix H, Eigen::VectorXd h, double tol = kDefaultTol) {
    if (H.rows() != h.size()) throw std::invalid_argument("H and h row counts differ");
    if (H.rows() < 3) throw UnboundedPolytope();
    Polytope P;
    P.H_ = std::move(H);
    P.h_ = std::move(h);
    P.normalize_rows();
    P.vertices_ = enumerate_vertices(P.H_, P.h_, tol);
    P.from_vertices_ = false;
    return P;
  }

  static Polytope from_vertices(std::vector<Point> points, double tol = kDefaultTol) {
    for (const auto& p : points) {
      if (!is_finite(p)) throw GeometryError("non-finite polytope vertex");
    }
    std::vector<Point> hull = detail::convex_hull(std::move(points));
    if (hull.size() < 3 || detail::ring_area(hull) < tol * tol) throw DegeneratePolytope();
    Polytope P;
    const auto n = static_cast<Eigen::Index>(hull.size());
    P.H_.resize(n, 2);
    P.h_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Point& a = hull[static_cast<std::size_t>(i)];
      const Point& b = hull[static_cast<std::size_t>((i + 1) % n)];
      const Point normal((b - a).y(), -(b - a).x());  // outward for CCW rings
      P.H_.row(i) = normal.transpose();
      P.h_(i) = normal.dot(a);
    }
    P.normalize_rows();
    P.vertices_ = std::move(hull);
    P.from_vertices_ = true;
    return P;
  }

  const HalfspaceMatrix& H() const { return H_; }
  const Eigen::VectorXd& h() const { return h_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t num_constraints() const { return static_cast<std::size_t>(H_.rows()); }

  // Whether the polytope was given as a vertex list (kept for serialization).
  bool from_vertices() const { return from_vertices_; }

  double area() const { return detail::ring_area(vertices_); }
  Point centroid() const { return detail::mean_point(vertices_); }

  double perimeter() const {
    double len = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      len += (vertices_[(i + 1) % vertices_.size()] - vertices_[i]).norm();
    }
    return len;
  }

  Segment edge(std::size_t i) const {
    return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
  }

  // Maximum constraint violation H p - h (negative inside).
  double max_slack(const Point& p) const { return (H_ * p - h_).maxCoeff(); }

 private:
  void normalize_rows() {
    for (Eigen::Index i = 0; i < H_.rows(); ++i) {
      const double n = H_.row(i).norm();
      if (n > 0.0) {
        H_.row(i) /= n;
        h_(i) /= n;
      }
    }
  }

  HalfspaceMatrix H_;
  Eigen::VectorXd h_;
  std::vector<Point> vertices_;
  bool from_vertices_ = false;
};

/// True iff H p <= h + tol componentwise.
inline bool contains(const Polytope& poly, const Point& p, double tol = kDefaultTol) {
  return poly.max_slack(p) <= tol;
}

/// All points of the polygon boundary at distance `radius` from `center`.
/// Each edge is intersected with the circle via its quadratic; tangencies
/// (line distance within tol of the radius) give a single point, and hits at
/// shared edge endpoints are merged within tol.
inline std::vector<Point> circle_boundary_intersections(const Polytope& poly, const Point& center,
                                                        double radius, double tol = kDefaultTol) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  std::vector<Point> out;
  const auto& verts = poly.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Segment e = poly.edge(i);
    const Point d = e.end - e.start;
    const double len = d.norm();
    if (len == 0.0) continue;
    const Point f = e.start - center;
    const double foot = -f.dot(d) / (len * len);
    const double dist = (f + foot * d).norm();
    const double slop = tol / len;
    const auto emit = [&](double t) {
      if (t < -slop || t > 1.0 + slop) return;
      t = std::clamp(t, 0.0, 1.0);
      detail::push_unique(out, e.start + t * d, tol);
    };
    if (std::abs(dist - radius) <= tol) {
      emit(foot);
    } else if (dist < radius) {
      const double half_chord = std::sqrt(radius * radius - dist * dist) / len;
      emit(foot - half_chord);
      emit(foot + half_chord);
    }
  }
  return out;
}

/// Sum of Euclidean lengths of consecutive segments.
inline double polyline_length(std::span<const Point> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += (points[i] - points[i - 1]).norm();
  return total;
}

inline bool segment_budget_feasible(const Segment& seg, double budget) {
  return seg.length() <= budget;
}

/// Parameter interval [t0, t1] of p + t (q - p), t in [0, 1], that lies in
/// the polytope within tol, or nullopt when the segment misses it.
inline std::optional<std::pair<double, double>> clip_segment(const Polytope& poly, const Point& p,
                                                             const Point& q, double tol = kDefaultTol) {
  double lo = 0.0, hi = 1.0;
  const Point d = q - p;
  for (Eigen::Index i = 0; i < poly.H().rows(); ++i) {
    const double num = poly.h()(i) + tol - poly.H().row(i).dot(p);
    const double den = poly.H().row(i).dot(d);
    if (den == 0.0) {
      if (num < 0.0) return std::nullopt;
    } else if (den > 0.0) {
      hi = std::min(hi, num / den);
    } else {
      lo = std::max(lo, num / den);
    }
    if (lo > hi) return std::nullopt;
  }
  return std::make_pair(lo, hi);
}

/// Euclidean distance between two convex polygons (0 when they intersect).
inline double polytope_distance(const Polytope& a, const Polytope& b) {
  for (const auto& v : a.vertices()) {
    if (contains(b, v, 0.0)) return 0.0;
  }
  for (const auto& v : b.vertices()) {
    if (contains(a, v, 0.0)) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.vertices().size(); ++i) {
    const Segment ea = a.edge(i);
    for (std::size_t j = 0; j < b.vertices().size(); ++j) {
      const Segment eb = b.edge(j);
      if (detail::segments_intersect(ea.start, ea.end, eb.start, eb.end)) return 0.0;
      best = std::min({best, detail::point_segment_distance(ea.start, eb.start, eb.end),
                       detail::point_segment_distance(eb.start, ea.start, ea.end)});
    }
  }
  return best;
}

/// Distance from a point to a convex polygon (0 inside).
inline double point_polytope_distance(const Polytope& poly, const Point& p) {
  if (contains(poly, p, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.vertices().size(); ++i) {
    const Segment e = poly.edge(i);
    best = std::min(best, detail::point_segment_distance(p, e.start, e.end));
  }
  return best;
}

}  // namespace rcsp
