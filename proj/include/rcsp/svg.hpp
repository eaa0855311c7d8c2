#pragma once

// SVG figure: regions, the straight-line baseline, the graph-only path and
// the refined path. Output is byte-for-byte deterministic for fixed input.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "rcsp/scenario.hpp"

namespace rcsp {

namespace detail {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

inline std::string render_svg(const Scenario& scn, const PathSolution* solution, const PathSolution* graph_path) {
  double xmin = std::min(scn.start.x(), scn.end.x()), xmax = std::max(scn.start.x(), scn.end.x());
  double ymin = std::min(scn.start.y(), scn.end.y()), ymax = std::max(scn.start.y(), scn.end.y());
  const auto grow = [&](const Point& p) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  };
  for (const auto& P : scn.polytopes) {
    for (const auto& v : P.vertices()) grow(v);
  }
  for (const PathSolution* s : {solution, graph_path}) {
    if (s) {
      for (const auto& p : s->waypoints) grow(p);
    }
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double margin = 0.05 * span;
  xmin -= margin;
  ymin -= margin;
  xmax += margin;
  ymax += margin;

  const double width = 800.0;
  const double scale = width / (xmax - xmin);
  const double height = (ymax - ymin) * scale;
  const double legend_h = 70.0;
  const auto X = [&](const Point& p) { return detail::fmt_num((p.x() - xmin) * scale); };
  const auto Y = [&](const Point& p) { return detail::fmt_num((ymax - p.y()) * scale); };
  const auto points_attr = [&](const std::vector<Point>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += X(pts[i]) + "," + Y(pts[i]);
    }
    return s;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fmt_num(width) +
         "\" height=\"" + detail::fmt_num(height + legend_h) + "\" viewBox=\"0 0 " + detail::fmt_num(width) + " " +
         detail::fmt_num(height + legend_h) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + detail::fmt_num(width) + "\" height=\"" +
         detail::fmt_num(height + legend_h) + "\" fill=\"white\"/>\n";

  for (const auto& P : scn.polytopes) {
    svg += "  <polygon points=\"" + points_attr(P.vertices()) +
           "\" fill=\"#f5d742\" fill-opacity=\"0.8\" stroke=\"#8a7a1c\" stroke-width=\"1\"/>\n";
  }

  svg += "  <line x1=\"" + X(scn.start) + "\" y1=\"" + Y(scn.start) + "\" x2=\"" + X(scn.end) + "\" y2=\"" +
         Y(scn.end) + "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
  if (graph_path && graph_path->waypoints.size() > 1) {
    svg += "  <polyline points=\"" + points_attr(graph_path->waypoints) +
           "\" fill=\"none\" stroke=\"#1f4fd1\" stroke-width=\"2\"/>\n";
  }
  if (solution && solution->method != SolutionMethod::straight_line && solution->waypoints.size() > 1) {
    const char* colour = solution->method == SolutionMethod::refined ? "#d1241f" : "#1f4fd1";
    svg += "  <polyline points=\"" + points_attr(solution->waypoints) + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"2\"/>\n";
  }

  svg += "  <circle cx=\"" + X(scn.start) + "\" cy=\"" + Y(scn.start) + "\" r=\"5\" fill=\"#2a9d3a\"/>\n";
  svg += "  <circle cx=\"" + X(scn.end) + "\" cy=\"" + Y(scn.end) + "\" r=\"5\" fill=\"#7a1fd1\"/>\n";

  // Legend swatches are rects so the figure's line elements stay the paths.
  const double ly = height + 15.0;
  const auto legend = [&](int slot, const char* colour, const std::string& label) {
    const double lx = 10.0 + 260.0 * slot;
    svg += "  <rect x=\"" + detail::fmt_num(lx) + "\" y=\"" + detail::fmt_num(ly) +
           "\" width=\"20\" height=\"4\" fill=\"" + colour + "\"/>\n";
    svg += "  <text x=\"" + detail::fmt_num(lx + 28.0) + "\" y=\"" + detail::fmt_num(ly + 6.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + label + "</text>\n";
  };
  legend(0, "black", "straight line " + detail::fmt_num((scn.end - scn.start).norm()));
  if (graph_path) legend(1, "#1f4fd1", "graph path " + detail::fmt_num(graph_path->total_length));
  if (solution && solution->method == SolutionMethod::refined) {
    legend(2, "#d1241f", "refined path " + detail::fmt_num(solution->total_length));
  }
  svg += "  <text x=\"10\" y=\"" + detail::fmt_num(ly + 40.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">budget " + detail::fmt_num(scn.budget) + ", " +
         std::to_string(scn.polytopes.size()) + " regions</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace rcsp
