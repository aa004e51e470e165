#pragma once

#include <array>
#include <optional>
#include <vector>

#include "busembed/core.hpp"
#include "busembed/twosat.hpp"

namespace busembed {

// Each color has exactly two candidate bus positions: through its topmost
// point (x_c true) or through its bottommost point (x_c false). Single-point
// colors are fixed and carry no variable.
struct HalfBusCandidates {
  std::vector<Rat> y_top;
  std::vector<Rat> y_bottom;
  std::vector<bool> fixed;  // single-point color
};

inline HalfBusCandidates halfbus_candidates(const ColoredPointSet& inst) {
  const int k = inst.k();
  HalfBusCandidates c;
  c.y_top.assign(k, Rat(0));
  c.y_bottom.assign(k, Rat(0));
  c.fixed.assign(k, true);
  std::vector<bool> seen(k, false);
  for (const auto& p : inst.points) {
    int col = p.color;
    if (!seen[col]) {
      seen[col] = true;
      c.y_top[col] = c.y_bottom[col] = p.y;
    } else {
      c.fixed[col] = false;
      c.y_top[col] = std::max(c.y_top[col], p.y);
      c.y_bottom[col] = std::min(c.y_bottom[col], p.y);
    }
  }
  for (int i = 0; i < k; ++i)
    if (!seen[i]) throw Error("empty color class: " + inst.color_names[i]);
  return c;
}

struct HalfBusClauses {
  TwoSatFormula formula{0};
  std::vector<int> var_of_color;  // -1 for fixed colors
  // two single-point colors whose fixed buses already cross
  bool fixed_infeasible = false;
};

namespace detail {

// Crossing test for one color pair at chosen candidate heights; exactly the
// planarity predicate restricted to the pair.
inline bool pair_crossing(const ColoredPointSet& inst,
                          const std::vector<Span>& spans,
                          const std::vector<std::vector<int>>& pts_of, int c1,
                          const Rat& y1, int c2, const Rat& y2) {
  if (y1 == y2 && spans[c1].overlaps(spans[c2])) return true;
  auto side = [&](int a, const Rat& ya, int b, const Rat& yb) {
    for (int i : pts_of[b]) {
      const Point& p = inst.points[i];
      if (!spans[a].contains(p.x)) continue;
      if (p.y == ya) return true;  // foreign point on the bus
      Rat lo = std::min(p.y, yb), hi = std::max(p.y, yb);
      if (lo <= ya && ya <= hi) return true;  // connection crosses the bus
    }
    return false;
  };
  return side(c1, y1, c2, y2) || side(c2, y2, c1, y1);
}

}  // namespace detail

// Builds the 2-SAT constraints by trying all four bus-type combinations per
// color pair geometrically and forbidding the crossing ones. Combinations
// collapsing a whole row or column become unit clauses; an all-crossing pair
// yields two contradictory units.
inline HalfBusClauses build_clauses(const ColoredPointSet& inst) {
  const int k = inst.k();
  auto cand = halfbus_candidates(inst);
  auto spans = compute_spans(inst);
  std::vector<std::vector<int>> pts_of(k);
  for (int i = 0; i < inst.n(); ++i)
    pts_of[inst.points[i].color].push_back(i);

  HalfBusClauses out;
  out.var_of_color.assign(k, -1);
  int vars = 0;
  for (int c = 0; c < k; ++c)
    if (!cand.fixed[c]) out.var_of_color[c] = vars++;
  out.formula = TwoSatFormula(vars);

  auto y_of = [&](int c, bool top) {
    return top ? cand.y_top[c] : cand.y_bottom[c];
  };

  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      bool cross[2][2];
      for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb)
          cross[ta][tb] = detail::pair_crossing(
              inst, spans, pts_of, a, y_of(a, ta), b, y_of(b, tb));
      int va = out.var_of_color[a], vb = out.var_of_color[b];
      if (va < 0 && vb < 0) {
        if (cross[0][0]) out.fixed_infeasible = true;
        continue;
      }
      if (va < 0 || vb < 0) {
        // one candidate pair is frozen; restrict the other color
        int v = va < 0 ? vb : va;
        for (int t = 0; t < 2; ++t) {
          bool x = va < 0 ? cross[0][t] : cross[t][0];
          if (x)
            out.formula.add_unit(t ? TwoSatFormula::neg(v)
                                   : TwoSatFormula::pos(v));
        }
        continue;
      }
      bool covered[2][2] = {{false, false}, {false, false}};
      for (int ta = 0; ta < 2; ++ta)
        if (cross[ta][0] && cross[ta][1]) {
          out.formula.add_unit(ta ? TwoSatFormula::neg(va)
                                  : TwoSatFormula::pos(va));
          covered[ta][0] = covered[ta][1] = true;
        }
      for (int tb = 0; tb < 2; ++tb)
        if (cross[0][tb] && cross[1][tb] && !(covered[0][tb] && covered[1][tb])) {
          out.formula.add_unit(tb ? TwoSatFormula::neg(vb)
                                  : TwoSatFormula::pos(vb));
          covered[0][tb] = covered[1][tb] = true;
        }
      for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb)
          if (cross[ta][tb] && !covered[ta][tb])
            out.formula.add_clause(
                ta ? TwoSatFormula::neg(va) : TwoSatFormula::pos(va),
                tb ? TwoSatFormula::neg(vb) : TwoSatFormula::pos(vb));
    }
  }
  return out;
}

struct HalfBusResult {
  bool feasible = false;
  BusLayout layout;
  std::vector<bool> top_assignment;  // per color: bus through topmost point
};

inline HalfBusResult solve_halfbep(const ColoredPointSet& inst) {
  auto clauses = build_clauses(inst);
  HalfBusResult res;
  if (clauses.fixed_infeasible) return res;
  auto sat = solve_2sat(clauses.formula);
  if (!sat.satisfiable) return res;
  auto cand = halfbus_candidates(inst);
  res.feasible = true;
  res.layout.bus_y.assign(inst.k(), Rat(0));
  res.top_assignment.assign(inst.k(), true);
  for (int c = 0; c < inst.k(); ++c) {
    int v = clauses.var_of_color[c];
    bool top = v < 0 ? true : sat.assignment[v];
    res.top_assignment[c] = top;
    res.layout.bus_y[c] = top ? cand.y_top[c] : cand.y_bottom[c];
  }
  return res;
}

}  // namespace busembed
