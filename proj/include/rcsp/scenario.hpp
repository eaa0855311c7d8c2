#pragma once

// Problem instances, path solutions, their JSON forms and validation.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rcsp/geometry.hpp"

namespace rcsp {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a scenario violates one of its invariants; `invariant()`
/// names the violated rule (e.g. "disjointness", "budget").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : std::runtime_error("validation failed (" + invariant + "): " + detail),
        invariant_(std::move(invariant)) {}

  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

inline constexpr int kDefaultLevels = 4;

struct Scenario {
  Point start = Point::Zero();
  Point end = Point::Zero();
  double budget = 1.0;
  int levels = kDefaultLevels;
  double tol = kDefaultTol;
  std::vector<Polytope> polytopes;
  // Informational notes produced by validation (e.g. start inside a region).
  std::vector<std::string> notes;

  std::size_t num_polytopes() const { return polytopes.size(); }

  // Index of the polytope containing p within tol, if any.
  std::optional<int> region_of(const Point& p) const {
    for (std::size_t i = 0; i < polytopes.size(); ++i) {
      if (contains(polytopes[i], p, tol)) return static_cast<int>(i);
    }
    return std::nullopt;
  }
};

/// Ordered, repetition-free list of polytope indices (0-based positions in
/// Scenario::polytopes) visited by a path.
struct PolytopeSequence {
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool operator==(const PolytopeSequence&) const = default;
};

enum class SolutionMethod { graph_only, refined, straight_line };

inline const char* to_string(SolutionMethod m) {
  switch (m) {
    case SolutionMethod::graph_only:
      return "graph_only";
    case SolutionMethod::refined:
      return "refined";
    case SolutionMethod::straight_line:
      return "straight_line";
  }
  return "unknown";
}

struct PathSolution {
  std::vector<Point> waypoints;
  std::vector<double> segment_lengths;
  // True for segments that run inside a single region and are exempt from the budget.
  std::vector<bool> segment_in_region;
  PolytopeSequence sequence;
  double total_length = 0.0;
  SolutionMethod method = SolutionMethod::straight_line;

  // Fills segment_lengths and total_length from the waypoints.
  void recompute_lengths() {
    segment_lengths.clear();
    total_length = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      segment_lengths.push_back((waypoints[i] - waypoints[i - 1]).norm());
      total_length += segment_lengths.back();
    }
  }
};

inline PathSolution straight_line_solution(const Scenario& scn) {
  PathSolution sol;
  sol.waypoints = {scn.start, scn.end};
  sol.segment_in_region = {false};
  sol.method = SolutionMethod::straight_line;
  sol.recompute_lengths();
  return sol;
}

/// Checks the scenario invariants in place and records informational notes.
inline void validate_scenario(Scenario& scn) {
  scn.notes.clear();
  if (!is_finite(scn.start)) throw ValidationError("finite start", "start coordinates are not finite");
  if (!is_finite(scn.end)) throw ValidationError("finite end", "end coordinates are not finite");
  if (!std::isfinite(scn.budget) || scn.budget <= 0.0) {
    throw ValidationError("budget", "budget must be a positive finite number");
  }
  if (scn.levels < 1) throw ValidationError("levels", "levels must be at least 1");
  if (!std::isfinite(scn.tol) || scn.tol < 0.0) throw ValidationError("tol", "tol must be >= 0");
  for (std::size_t i = 0; i < scn.polytopes.size(); ++i) {
    for (std::size_t j = i + 1; j < scn.polytopes.size(); ++j) {
      const double d = polytope_distance(scn.polytopes[i], scn.polytopes[j]);
      if (!(d > scn.tol)) {
        throw ValidationError("disjointness", "polytopes " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " are not disjoint");
      }
    }
  }
  if (auto r = scn.region_of(scn.start)) {
    scn.notes.push_back("start lies inside polytope " + std::to_string(*r));
  }
  if (auto r = scn.region_of(scn.end)) {
    scn.notes.push_back("end lies inside polytope " + std::to_string(*r));
  }
}

namespace detail {

inline Point point_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(std::string(what) + " must be an array [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json point_to_json(const Point& p) { return nlohmann::json::array({p.x(), p.y()}); }

inline Polytope polytope_from_json(const nlohmann::json& j, double tol) {
  if (!j.is_object()) throw ParseError("polytope entry must be an object");
  if (j.contains("vertices")) {
    const auto& vs = j.at("vertices");
    if (!vs.is_array()) throw ParseError("polytope vertices must be an array");
    std::vector<Point> pts;
    for (const auto& v : vs) pts.push_back(point_from_json(v, "polytope vertex"));
    return Polytope::from_vertices(std::move(pts), tol);
  }
  if (j.contains("H") && j.contains("h")) {
    const auto& Hj = j.at("H");
    const auto& hj = j.at("h");
    if (!Hj.is_array() || !hj.is_array() || Hj.size() != hj.size()) {
      throw ParseError("polytope H and h must be arrays of equal length");
    }
    HalfspaceMatrix H(static_cast<Eigen::Index>(Hj.size()), 2);
    Eigen::VectorXd h(static_cast<Eigen::Index>(hj.size()));
    for (std::size_t i = 0; i < Hj.size(); ++i) {
      const Point row = point_from_json(Hj[i], "H row");
      if (!hj[i].is_number()) throw ParseError("h entries must be numbers");
      H.row(static_cast<Eigen::Index>(i)) = row.transpose();
      h(static_cast<Eigen::Index>(i)) = hj[i].get<double>();
    }
    return Polytope::from_halfspaces(std::move(H), std::move(h), tol);
  }
  throw ParseError("polytope needs either \"vertices\" or \"H\" and \"h\"");
}

inline nlohmann::json polytope_to_json(const Polytope& P) {
  nlohmann::json j;
  if (P.from_vertices()) {
    auto& vs = j["vertices"] = nlohmann::json::array();
    for (const auto& v : P.vertices()) vs.push_back(point_to_json(v));
  } else {
    auto& H = j["H"] = nlohmann::json::array();
    auto& h = j["h"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < P.H().rows(); ++i) {
      H.push_back(nlohmann::json::array({P.H()(i, 0), P.H()(i, 1)}));
      h.push_back(P.h()(i));
    }
  }
  return j;
}

}  // namespace detail

/// Parses and validates a scenario from JSON text.
inline Scenario load_scenario(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  for (const char* key : {"start", "end", "budget"}) {
    if (!j.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  }

  Scenario scn;
  scn.start = detail::point_from_json(j.at("start"), "start");
  scn.end = detail::point_from_json(j.at("end"), "end");
  if (!j.at("budget").is_number()) throw ParseError("budget must be a number");
  scn.budget = j.at("budget").get<double>();
  if (j.contains("levels")) {
    if (!j.at("levels").is_number_integer()) throw ParseError("levels must be an integer");
    scn.levels = j.at("levels").get<int>();
  }
  if (j.contains("tol")) {
    if (!j.at("tol").is_number()) throw ParseError("tol must be a number");
    scn.tol = j.at("tol").get<double>();
  }
  if (j.contains("polytopes")) {
    const auto& ps = j.at("polytopes");
    if (!ps.is_array()) throw ParseError("polytopes must be an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      try {
        scn.polytopes.push_back(detail::polytope_from_json(ps[i], scn.tol));
      } catch (const UnboundedPolytope& e) {
        throw ValidationError("bounded polytope", "polytope " + std::to_string(i) + ": " + e.what());
      } catch (const EmptyPolytope& e) {
        throw ValidationError("nonempty polytope", "polytope " + std::to_string(i) + ": " + e.what());
      } catch (const GeometryError& e) {
        throw ValidationError("full-dimensional polytope",
                              "polytope " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  validate_scenario(scn);
  return scn;
}

inline nlohmann::json scenario_to_json(const Scenario& scn) {
  nlohmann::json j;
  j["start"] = detail::point_to_json(scn.start);
  j["end"] = detail::point_to_json(scn.end);
  j["budget"] = scn.budget;
  j["levels"] = scn.levels;
  j["tol"] = scn.tol;
  auto& ps = j["polytopes"] = nlohmann::json::array();
  for (const auto& P : scn.polytopes) ps.push_back(detail::polytope_to_json(P));
  return j;
}

inline std::string save_scenario(const Scenario& scn) { return scenario_to_json(scn).dump(2) + "\n"; }

inline nlohmann::json solution_to_json(const PathSolution& sol) {
  nlohmann::json j;
  j["method"] = to_string(sol.method);
  j["total_length"] = sol.total_length;
  auto& wp = j["waypoints"] = nlohmann::json::array();
  for (const auto& p : sol.waypoints) wp.push_back(detail::point_to_json(p));
  j["sequence"] = sol.sequence.indices;
  j["segment_lengths"] = sol.segment_lengths;
  auto& flags = j["segment_in_region"] = nlohmann::json::array();
  for (bool b : sol.segment_in_region) flags.push_back(b);
  return j;
}

inline PathSolution solution_from_json(const nlohmann::json& j) {
  try {
    PathSolution sol;
    const auto method = j.at("method").get<std::string>();
    if (method == "graph_only") {
      sol.method = SolutionMethod::graph_only;
    } else if (method == "refined") {
      sol.method = SolutionMethod::refined;
    } else if (method == "straight_line") {
      sol.method = SolutionMethod::straight_line;
    } else {
      throw ParseError("unknown solution method \"" + method + "\"");
    }
    sol.total_length = j.at("total_length").get<double>();
    for (const auto& p : j.at("waypoints")) sol.waypoints.push_back(detail::point_from_json(p, "waypoint"));
    sol.sequence.indices = j.at("sequence").get<std::vector<int>>();
    sol.segment_lengths = j.at("segment_lengths").get<std::vector<double>>();
    sol.segment_in_region = j.at("segment_in_region").get<std::vector<bool>>();
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed solution: ") + e.what());
  }
}

/// Replays a path under the budget-reset dynamics. Distance accumulates
/// along segments outside every region and resets wherever the path is inside
/// one (including regions it merely crosses). Segments tagged as in-region
/// must have both endpoints in a common polytope.
inline bool check_path_feasible(const Scenario& scn, const PathSolution& sol) {
  const auto& w = sol.waypoints;
  if (w.empty()) return false;
  if ((w.front() - scn.start).norm() > scn.tol || (w.back() - scn.end).norm() > scn.tol) return false;
  if (w.size() > 1 && sol.segment_in_region.size() + 1 != w.size()) return false;

  const double limit = scn.budget + scn.tol;
  double used = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const Point& p = w[i];
    const Point& q = w[i + 1];
    if (sol.segment_in_region[i]) {
      const bool shared = std::any_of(scn.polytopes.begin(), scn.polytopes.end(), [&](const Polytope& P) {
        return contains(P, p, scn.tol) && contains(P, q, scn.tol);
      });
      if (!shared) return false;
      used = 0.0;
      continue;
    }
    std::vector<std::pair<double, double>> inside;
    for (const auto& P : scn.polytopes) {
      if (auto iv = clip_segment(P, p, q, scn.tol)) inside.push_back(*iv);
    }
    std::sort(inside.begin(), inside.end());
    const double len = (q - p).norm();
    double cursor = 0.0;
    for (const auto& [lo, hi] : inside) {
      if (lo > cursor) used += (lo - cursor) * len;
      if (used > limit) return false;
      used = 0.0;
      cursor = std::max(cursor, hi);
    }
    if (cursor < 1.0) used += (1.0 - cursor) * len;
    if (used > limit) return false;
  }
  return true;
}

}  // namespace rcsp
