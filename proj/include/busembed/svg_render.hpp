#pragma once

#include <cstdio>
#include <set>
#include <string>

#include "busembed/core.hpp"

namespace busembed {

struct RenderOptions {
  double scale = 1.0;
  double margin = 20.0;
  // render layouts with crossings anyway, marking the offenders
  bool force = false;
};

// Deterministic SVG drawing: buses as thick horizontal segments, connections
// as thin verticals, points as filled circles. The y axis points upward via
// an explicit group transform (noted in the header comment).
inline std::string render_svg(const ColoredPointSet& inst,
                              const BusLayout& layout,
                              const RenderOptions& opt = {}) {
  auto violations = validate_planarity(inst, layout, EpsilonPolicy(inst.epsilon));
  if (!violations.empty() && !opt.force)
    throw Error("layout has planarity violations; pass force to render anyway");
  std::set<int> bad_colors;
  std::set<int> bad_points;
  for (const auto& v : violations) {
    if (v.color_a >= 0) bad_colors.insert(v.color_a);
    if (v.color_b >= 0) bad_colors.insert(v.color_b);
    if (v.point >= 0) bad_points.insert(v.point);
  }

  auto spans = inst.k() ? compute_spans(inst) : std::vector<Span>{};
  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  bool first = true;
  auto see = [&](double x, double y) {
    if (first) { min_x = max_x = x; min_y = max_y = y; first = false; return; }
    min_x = std::min(min_x, x); max_x = std::max(max_x, x);
    min_y = std::min(min_y, y); max_y = std::max(max_y, y);
  };
  for (const auto& p : inst.points) see(p.x.to_double(), p.y.to_double());
  for (int c = 0; c < inst.k(); ++c) see(0, layout.bus_y[c].to_double());

  double s = opt.scale, m = opt.margin;
  double w = (max_x - min_x) * s + 2 * m;
  double h = (max_y - min_y) * s + 2 * m;
  char buf[256];
  std::string out;
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- y axis points upward: drawing is flipped by the group "
         "transform below -->\n";
  emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.3f\" "
       "height=\"%.3f\" viewBox=\"0 0 %.3f %.3f\">\n", w, h, w, h);
  emit("<g transform=\"translate(%.3f,%.3f) scale(%.3f,-%.3f)\">\n",
       m - min_x * s, h - m + min_y * s, s, s);

  auto color_of = [&](int c) {
    static const char* palette[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};
    return palette[c % 10];
  };

  // connections first so buses and points draw over them
  for (int i = 0; i < inst.n(); ++i) {
    const Point& p = inst.points[i];
    const char* col = bad_points.count(i) ? "#000000" : color_of(p.color);
    emit("<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\" "
         "stroke=\"%s\" stroke-width=\"0.6\"/>\n",
         p.x.to_double(), p.y.to_double(), p.x.to_double(),
         layout.bus_y[p.color].to_double(), col);
  }
  for (int c = 0; c < inst.k(); ++c) {
    const char* col = bad_colors.count(c) ? "#000000" : color_of(c);
    emit("<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\" "
         "stroke=\"%s\" stroke-width=\"2.4\"/>\n",
         spans[c].x_left.to_double(), layout.bus_y[c].to_double(),
         spans[c].x_right.to_double(), layout.bus_y[c].to_double(), col);
  }
  for (int i = 0; i < inst.n(); ++i) {
    const Point& p = inst.points[i];
    emit("<circle cx=\"%.4f\" cy=\"%.4f\" r=\"1.8\" fill=\"%s\"/>\n",
         p.x.to_double(), p.y.to_double(), color_of(p.color));
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace busembed
