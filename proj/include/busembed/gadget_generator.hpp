#pragma once

#include <array>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "busembed/core.hpp"
#include "busembed/dedupe.hpp"

namespace busembed {

// 3-CNF input for the hardness construction. Literals are +v / -v, 1-based.
struct Cnf {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

inline Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  std::istringstream in(text);
  std::string line;
  std::vector<int> acc;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      int nc;
      if (!(ls >> p >> fmt >> cnf.num_vars >> nc) || fmt != "cnf")
        throw Error("dimacs: bad problem line");
      have_header = true;
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (acc.size() != 3)
          throw Error("dimacs: the generator handles exactly-3-literal clauses");
        cnf.clauses.push_back({acc[0], acc[1], acc[2]});
        acc.clear();
      } else {
        acc.push_back(lit);
      }
    }
  }
  if (!have_header) throw Error("dimacs: missing p cnf header");
  if (!acc.empty()) throw Error("dimacs: clause not terminated by 0");
  return cnf;
}

inline bool cnf_satisfied(const Cnf& cnf, const std::vector<bool>& assign) {
  for (const auto& cl : cnf.clauses) {
    bool ok = false;
    for (int lit : cl) {
      int v = std::abs(lit) - 1;
      ok = ok || (lit > 0 ? assign[v] : !assign[v]);
    }
    if (!ok) return false;
  }
  return true;
}

// Clause placement: top clauses hang above the variable line, bottom clauses
// below (mirrored).
struct FormulaLayout {
  std::vector<int> variable_order;  // 1-based variable ids, left to right
  std::vector<bool> clause_on_top;  // per clause
};

inline FormulaLayout default_layout(const Cnf& cnf) {
  FormulaLayout l;
  for (int v = 1; v <= cnf.num_vars; ++v) l.variable_order.push_back(v);
  for (size_t i = 0; i < cnf.clauses.size(); ++i)
    l.clause_on_top.push_back(i % 2 == 0);
  return l;
}

struct GadgetInstance {
  ColoredPointSet instance;
  Cnf formula;
  std::vector<int> variable_color;  // per 0-based variable: link color id
  std::vector<int> clause_points;   // per clause: points in its gadget
};

// Axis-parallel segment simulation. A horizontal segment becomes one fresh
// color with a point at each endpoint. A vertical one becomes a column of
// stacked point pairs at 2*eps spacing, all of one color: every connection
// runs to the single shared bus, so together they cover the whole extent no
// matter where that bus ends up.
inline std::vector<std::pair<Rat, Rat>> simulate_segment(Rat x1, Rat y1,
                                                         Rat x2, Rat y2,
                                                         const Rat& eps) {
  std::vector<std::pair<Rat, Rat>> pts;
  if (y1 == y2) {  // horizontal (includes zero length)
    pts.emplace_back(x1, y1);
    pts.emplace_back(x2, y2);
    return pts;
  }
  if (!(x1 == x2))
    throw Error("simulate_segment: segment must be axis-parallel");
  if (eps <= Rat(0)) throw Error("simulate_segment: vertical needs eps > 0");
  if (y2 < y1) std::swap(y1, y2);
  Rat spacing = eps * Rat(2);
  std::vector<Rat> levels;
  for (Rat pos = y1; pos < y2; pos += spacing) levels.push_back(pos);
  levels.push_back(y2);
  Rat w(1, 2);
  for (const Rat& y : levels) {
    pts.emplace_back(x1 - w, y);
    pts.emplace_back(x1 + w, y);
  }
  return pts;
}

namespace detail {

// Emits the reduction. All coordinates are pre-staggered on a 1/20 grid so
// the instance is in general position as emitted; the de-duplication shift
// is then the identity and every pinning margin is exact by construction.
//
// Mechanics used throughout (eps = 1):
//  * a single-color column blocks any bus spanning it inside its y-range,
//    because its connections to the one shared bus cover the range
//    contiguously wherever that bus sits;
//  * a chain link (two near-level points of one color) must put its bus a
//    full eps above or below itself; neighbouring links at pitch <= 2 eps
//    pin each other, which propagates sqcap upward and sqcup downward;
//  * two interleaved columns with overlapping ranges seal an escape zone:
//    whichever way both buses dodge a crossing connection, one of them ends
//    up inside the other's connection cover.
class GadgetBuilder {
 public:
  GadgetBuilder(const Cnf& cnf, const FormulaLayout& layout)
      : cnf_(cnf), layout_(layout) {
    if (cnf.num_vars < 1) throw Error("gadget generator: empty formula");
    if (cnf.clauses.size() > 2)
      throw Error(
          "gadget generator: the fixed layout family supports at most 2 "
          "clauses");
    if (cnf.num_vars > 4)
      throw Error(
          "gadget generator: the fixed layout family supports at most 4 "
          "variables");
    if ((int)layout.variable_order.size() != cnf.num_vars ||
        layout.clause_on_top.size() != cnf.clauses.size())
      throw Error("gadget generator: layout does not match the formula");
    for (const auto& cl : cnf.clauses) {
      int a = std::abs(cl[0]), b = std::abs(cl[1]), c = std::abs(cl[2]);
      if (a < 1 || b < 1 || c < 1 || a > cnf.num_vars || b > cnf.num_vars ||
          c > cnf.num_vars)
        throw Error("gadget generator: literal out of range");
      if (a == b || a == c || b == c)
        throw Error("gadget generator: repeated variable in a clause");
    }
  }

  GadgetInstance build() {
    out_.formula = cnf_;
    out_.instance.epsilon = kEps;
    out_.variable_color.assign(cnf_.num_vars, -1);

    for (int i = 0; i < cnf_.num_vars; ++i) emit_variable(i);
    for (size_t c = 0; c < cnf_.clauses.size(); ++c) emit_clause((int)c);

    out_.instance = builder_.build();
    for (int v = 0; v < cnf_.num_vars; ++v) {
      auto it = builder_.index.find(var_color_name(v));
      out_.variable_color[v] = it->second;
    }
    if (!out_.instance.general_position())
      throw Error("internal: gadget construction has coordinate collisions");
    return std::move(out_);
  }

 private:
  const Cnf& cnf_;
  const FormulaLayout& layout_;
  GadgetInstance out_;
  InstanceBuilder builder_;

  const Rat kEps = Rat(1);
  const Rat kTick = Rat(1, 20);

  static constexpr long long kVarPitch = 200;

  int link_stagger_ = 0;  // globally unique per-link level offset

  std::string var_color_name(int var0) const {
    return "var" + std::to_string(var0 + 1);
  }

  Rat var_x(int var0) const {
    int pos = 0;
    for (size_t i = 0; i < layout_.variable_order.size(); ++i)
      if (layout_.variable_order[i] == var0 + 1) pos = (int)i;
    return Rat(kVarPitch * (pos + 1));
  }

  // alternating whole-pair x shift keeps stacked links mutually interleaved
  // while every coordinate stays distinct
  Rat pair_shift(int idx) const {
    int mag = (idx + 1) / 2;
    Rat s = kTick * Rat(mag);
    return idx % 2 == 1 ? s : -s;
  }

  void emit_link_at(const std::string& color, const Rat& x1, const Rat& x2,
                    const Rat& y) {
    Rat off = kTick * Rat(2 * link_stagger_);
    builder_.add(x1, y + off, color);
    builder_.add(x2, y + off + kTick, color);
    ++link_stagger_;
  }

  void emit_variable(int var0) {
    Rat x = var_x(var0);
    emit_link_at(var_color_name(var0), x - Rat(8), x + Rat(8), Rat(0));
  }

  struct ChainEnd {
    Rat ladder_xl, ladder_xr;  // base x pair of the vertical ladder
    int next_idx = 0;          // next pair-shift index along the ladder
  };

  // Variable end of one literal chain: the turn junction plus vertical
  // risers toward the clause boundary. Exactly 5 links per chain.
  ChainEnd emit_chain(int clause, int slot, int lit, const Rat& dir) {
    int var0 = std::abs(lit) - 1;
    bool positive = lit > 0;
    bool top = dir > Rat(0);
    // propagation through the mirror flips the parity rule for bottom
    // clauses
    bool extra_xor = top ? !positive : positive;
    Rat x = var_x(var0);
    Rat side = clause == 0 ? Rat(1) : Rat(-1);
    std::string tag = "c" + std::to_string(clause) + "l" + std::to_string(slot);

    Rat j_outer;
    if (!extra_xor) {
      Rat m = x + side * Rat(4);
      j_outer = x + side * Rat(20 + 2 * slot);
      emit_link_at("jn_" + tag, std::min(m, j_outer), std::max(m, j_outer),
                   Rat(0));
    } else {
      Rat w1 = x + side * Rat(2);
      Rat w2 = x + side * Rat(14 + 2 * slot);
      emit_link_at("wj_" + tag, std::min(w1, w2), std::max(w1, w2), Rat(0));
      Rat j1 = x + side * Rat(10 + 2 * slot);
      j_outer = x + side * Rat(26 + 2 * slot);
      emit_link_at("jn_" + tag, std::min(j1, j_outer), std::max(j1, j_outer),
                   Rat(0));
    }

    ChainEnd end;
    end.ladder_xl = std::min(j_outer - side * Rat(3), j_outer);
    end.ladder_xr = std::max(j_outer - side * Rat(3), j_outer);

    int risers = extra_xor ? 3 : 4;
    Rat step = extra_xor ? Rat(2) : Rat(3, 2);
    Rat yy(0);
    for (int i = 0; i < risers; ++i) {
      yy += step;
      Rat sh = pair_shift(end.next_idx++);
      emit_link_at("rs_" + tag + "_" + std::to_string(i), end.ladder_xl + sh,
                   end.ladder_xr + sh, dir * yy);
    }
    return end;
  }

  // Single-color column: blocks any bus spanning [x1,x2] within the level
  // range, unconditionally.
  void emit_pillar(const std::string& color, const Rat& x1, const Rat& x2,
                   const std::vector<Rat>& levels, const Rat& base,
                   const Rat& dir, int stagger) {
    int i = 0;
    for (const Rat& lv : levels) {
      Rat y = dir * (base + lv) + kTick * Rat(stagger);
      Rat creep = kTick * Rat(i);
      builder_.add(x1 + creep, y, color);
      builder_.add(x2 - creep, y + kTick, color);
      ++i;
    }
  }

  // Clause gadget, local levels relative to the boundary (dir mirrors bottom
  // clauses):
  //   columns on lines l and r:  s1 [-14,4]  s2 [5,9]  s3 [10,14]  s4 [15,19]
  //   literal gaps:              (4,5)  (9,10)  (14,15)
  //   ladder rungs per slot:     s0: 0 2 4
  //                              s1: 0 2 3.75 5.5 7.5 9
  //                              s2: 0 2 3.75 5.5 7 8.75 10.5 12.5 14
  //   main points:               left at -12 (below), right at 19.5 (above)
  //   caps over the main xs:     up [20,26]+[25,31], down [-21,-15]+[-16,-10]
  void emit_clause(int clause) {
    bool top = layout_.clause_on_top[clause];
    Rat dir = top ? Rat(1) : Rat(-1);
    Rat base = Rat(8);

    const auto& lits = cnf_.clauses[clause];
    std::array<ChainEnd, 3> chains;
    for (int s = 0; s < 3; ++s)
      chains[s] = emit_chain(clause, s, lits[s], dir);

    int before = (int)builder_.inst.points.size();
    std::string cl = "c" + std::to_string(clause);

    static const std::vector<std::vector<Rat>> rungs = {
        {Rat(0), Rat(2), Rat(4)},
        {Rat(0), Rat(2), Rat(15, 4), Rat(11, 2), Rat(15, 2), Rat(9)},
        {Rat(0), Rat(2), Rat(15, 4), Rat(11, 2), Rat(7), Rat(35, 4),
         Rat(21, 2), Rat(25, 2), Rat(14)}};
    for (int s = 0; s < 3; ++s) {
      std::string prefix = "lad_" + cl + "s" + std::to_string(s) + "_";
      int idx = chains[s].next_idx;
      int rung_no = 0;
      for (const Rat& r : rungs[s]) {
        Rat sh = pair_shift(idx++);
        bool gate = rung_no + 1 == (int)rungs[s].size();
        emit_link_at(prefix + (gate ? "gate" : std::to_string(rung_no)),
                     chains[s].ladder_xl + sh, chains[s].ladder_xr + sh,
                     dir * (base + r));
        ++rung_no;
      }
    }

    Rat xmin = chains[0].ladder_xl, xmax = chains[0].ladder_xr;
    for (int s = 1; s < 3; ++s) {
      xmin = std::min(xmin, chains[s].ladder_xl);
      xmax = std::max(xmax, chains[s].ladder_xr);
    }
    Rat lx = xmin - Rat(9) - Rat(clause);
    Rat rx = xmax + Rat(7) + Rat(clause);
    Rat xpl = lx - Rat(17) - Rat(2 * clause);
    Rat xpr = rx + Rat(19) + Rat(2 * clause);

    static const std::vector<Rat> s1_levels = {Rat(-14), Rat(-11), Rat(-8),
                                               Rat(-5),  Rat(-2),  Rat(1),
                                               Rat(4)};
    static const std::vector<Rat> s2_levels = {Rat(5), Rat(7), Rat(9)};
    static const std::vector<Rat> s3_levels = {Rat(10), Rat(12), Rat(14)};
    static const std::vector<Rat> s4_levels = {Rat(15), Rat(17), Rat(19)};
    const std::vector<const std::vector<Rat>*> col_levels = {
        &s1_levels, &s2_levels, &s3_levels, &s4_levels};
    for (int i = 0; i < 4; ++i) {
      emit_pillar("sl" + std::to_string(i + 1) + "_" + cl, lx, lx + Rat(3),
                  *col_levels[i], base, dir, 2 * i);
      emit_pillar("sr" + std::to_string(i + 1) + "_" + cl, rx, rx + Rat(3),
                  *col_levels[i], base, dir, 2 * i + 1);
    }

    std::string main_color = "main_" + cl;
    builder_.add(xpl, dir * (base + Rat(-12)), main_color);
    builder_.add(xpr, dir * (base + Rat(39, 2)) + kTick, main_color);

    // escape caps: interleaved column pairs straddling the main points' x
    emit_pillar("capA_" + cl, xpl - Rat(9), xpl + Rat(8),
                {Rat(20), Rat(26)}, base, dir, 9);
    emit_pillar("capB_" + cl, xpl - Rat(8), xpl + Rat(9),
                {Rat(25), Rat(31)}, base, dir, 11);
    emit_pillar("capC_" + cl, xpr - Rat(9), xpr + Rat(8),
                {Rat(-21), Rat(-15)}, base, dir, 13);
    emit_pillar("capD_" + cl, xpr - Rat(8), xpr + Rat(9),
                {Rat(-16), Rat(-10)}, base, dir, 15);

    out_.clause_points.push_back((int)builder_.inst.points.size() - before);
  }
};

}  // namespace detail

inline GadgetInstance build_instance(const Cnf& cnf,
                                     const FormulaLayout& layout) {
  detail::GadgetBuilder b(cnf, layout);
  return b.build();
}

inline GadgetInstance build_instance(const Cnf& cnf) {
  return build_instance(cnf, default_layout(cnf));
}

// Reads the per-variable truth value off a layout: bus above both points of
// the variable link means true, below means false.
inline std::vector<bool> decode_assignment(const GadgetInstance& g,
                                           const ColoredPointSet& solved,
                                           const BusLayout& layout) {
  std::vector<bool> assign(g.formula.num_vars, false);
  for (int v = 0; v < g.formula.num_vars; ++v) {
    int color = g.variable_color[v];
    Rat top, bottom;
    bool first = true;
    for (const auto& p : solved.points) {
      if (p.color != color) continue;
      if (first) { top = bottom = p.y; first = false; }
      else { top = std::max(top, p.y); bottom = std::min(bottom, p.y); }
    }
    if (first) throw Error("decode_assignment: missing variable color");
    const Rat& y = layout.bus_y[color];
    if (y > top)
      assign[v] = true;
    else if (y < bottom)
      assign[v] = false;
    else
      throw Error("decode_assignment: variable bus is a center bus");
  }
  return assign;
}

}  // namespace busembed
