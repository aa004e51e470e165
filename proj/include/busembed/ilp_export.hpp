#pragma once

#include <optional>
#include <string>
#include <vector>

#include "busembed/core.hpp"

namespace busembed {

struct IlpVariable {
  std::string name;
  bool binary = false;
  Rat lb;
  std::optional<Rat> ub;
};

struct IlpTerm {
  Rat coef;
  int var;
};

enum class RowKind {
  abs_upper,      // e_p >= y(c) - y(p)
  abs_lower,      // e_p >= y(p) - y(c)
  abs_nonneg,     // e_p >= 0
  color_bound,    // y(c) <= max y + 1
  big_m,          // one side of a disjunction
  binary_domain,  // b in {0,1}
};

struct IlpConstraint {
  std::string name;
  std::vector<IlpTerm> terms;
  char rel = '<';  // '<' means <=, '>' means >=
  Rat rhs;
  RowKind kind;
};

// Ink-minimizing model: variables y(c) per color, deviation slack e_p per
// point, two binaries per conflicting pair; objective sum of slacks.
struct IlpModel {
  std::vector<IlpVariable> vars;
  std::vector<IlpConstraint> constraints;
  std::vector<int> objective;  // slack variable indices
  Rat big_m;
  Rat delta;  // margin replacing strict inequalities
  int n = 0, k = 0;
  long long conflict_count = 0;
};

namespace detail {

inline std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (isalnum((unsigned char)c) || c == '_') ? c : '_';
  if (out.empty() || isdigit((unsigned char)out[0])) out = "c" + out;
  return out;
}

}  // namespace detail

inline IlpModel build_model(const ColoredPointSet& inst) {
  IlpModel m;
  m.n = inst.n();
  m.k = inst.k();
  auto conflicts = conflicting_pairs(inst);
  m.conflict_count = (long long)conflicts.pairs.size();

  Rat max_y = inst.points.empty() ? Rat(0) : inst.points[0].y;
  Rat min_y = max_y;
  for (const auto& p : inst.points) {
    max_y = std::max(max_y, p.y);
    min_y = std::min(min_y, p.y);
  }
  auto levels = sorted_point_levels(inst);
  m.delta = Rat(1, 2);
  if (levels.size() >= 2) {
    Rat gap = levels[1] - levels[0];
    for (size_t i = 2; i < levels.size(); ++i)
      gap = std::min(gap, levels[i] - levels[i - 1]);
    m.delta = gap / Rat(2);
  }
  // dominates any attainable difference of model quantities plus the margin;
  // y(c) ranges over [0, max_y + 1]
  m.big_m = max_y - std::min(min_y, Rat(0)) + Rat(2) + m.delta;

  std::vector<int> y_var(m.k), e_var(m.n);
  for (int c = 0; c < m.k; ++c) {
    y_var[c] = (int)m.vars.size();
    m.vars.push_back({"y_" + detail::sanitize(inst.color_names[c]), false,
                      Rat(0), max_y + Rat(1)});
  }
  for (int i = 0; i < m.n; ++i) {
    e_var[i] = (int)m.vars.size();
    m.vars.push_back({"e_" + std::to_string(i), false, Rat(0), std::nullopt});
    m.objective.push_back(e_var[i]);
  }

  for (int i = 0; i < m.n; ++i) {
    int c = inst.points[i].color;
    const Rat& py = inst.points[i].y;
    m.constraints.push_back({"abs_up_" + std::to_string(i),
                             {{Rat(1), e_var[i]}, {Rat(-1), y_var[c]}},
                             '>',
                             -py,
                             RowKind::abs_upper});
    m.constraints.push_back({"abs_dn_" + std::to_string(i),
                             {{Rat(1), e_var[i]}, {Rat(1), y_var[c]}},
                             '>',
                             py,
                             RowKind::abs_lower});
    m.constraints.push_back({"abs_nn_" + std::to_string(i),
                             {{Rat(1), e_var[i]}},
                             '>',
                             Rat(0),
                             RowKind::abs_nonneg});
  }
  for (int c = 0; c < m.k; ++c)
    m.constraints.push_back({"ub_" + detail::sanitize(inst.color_names[c]),
                             {{Rat(1), y_var[c]}},
                             '<',
                             max_y + Rat(1),
                             RowKind::color_bound});

  const Rat& M = m.big_m;
  const Rat& d = m.delta;
  for (size_t j = 0; j < conflicts.pairs.size(); ++j) {
    auto [pi, c] = conflicts.pairs[j];
    int cp = inst.points[pi].color;
    const Rat& py = inst.points[pi].y;
    int b1 = (int)m.vars.size();
    m.vars.push_back({"b_" + std::to_string(2 * j), true, Rat(0), Rat(1)});
    int b2 = (int)m.vars.size();
    m.vars.push_back({"b_" + std::to_string(2 * j + 1), true, Rat(0), Rat(1)});
    std::string tag = std::to_string(j);
    // (y(p) < y(c)) or (y(f(p)) > y(c)), selector b1
    m.constraints.push_back({"dj1a_" + tag,
                             {{Rat(-1), y_var[c]}, {-M, b1}},
                             '<',
                             -py - d,
                             RowKind::big_m});
    m.constraints.push_back({"dj1b_" + tag,
                             {{Rat(1), y_var[c]}, {Rat(-1), y_var[cp]}, {M, b1}},
                             '<',
                             M - d,
                             RowKind::big_m});
    // (y(p) > y(c)) or (y(f(p)) < y(c)), selector b2
    m.constraints.push_back({"dj2a_" + tag,
                             {{Rat(1), y_var[c]}, {-M, b2}},
                             '<',
                             py - d,
                             RowKind::big_m});
    m.constraints.push_back({"dj2b_" + tag,
                             {{Rat(-1), y_var[c]}, {Rat(1), y_var[cp]}, {M, b2}},
                             '<',
                             M - d,
                             RowKind::big_m});
    m.constraints.push_back({"bd_" + std::to_string(2 * j),
                             {{Rat(1), b1}},
                             '<',
                             Rat(1),
                             RowKind::binary_domain});
    m.constraints.push_back({"bd_" + std::to_string(2 * j + 1),
                             {{Rat(1), b2}},
                             '<',
                             Rat(1),
                             RowKind::binary_domain});
  }
  return m;
}

// CPLEX LP text. Deterministic: fixed section order, fixed variable naming,
// shortest exact decimals.
inline std::string write_lp(const IlpModel& m) {
  auto num = [](const Rat& v) {
    if (!v.decimal_exact())
      throw Error("LP export needs decimally representable coordinates, got " +
                  v.str());
    return v.str();
  };
  std::string out;
  out += "\\ bus embedding ink-minimization model\n";
  out += "\\ points=" + std::to_string(m.n) + " colors=" + std::to_string(m.k) +
         " conflicting_pairs=" + std::to_string(m.conflict_count) + "\n";
  out += "\\ strict planarity inequalities are relaxed by the margin delta=" +
         num(m.delta) + "\n";
  out += "\\ each conflicting pair uses two selector binaries with big-M=" +
         num(m.big_m) + "; selector 0 activates the first disjunct\n";
  out += "Minimize\n obj:";
  for (size_t i = 0; i < m.objective.size(); ++i) {
    out += (i ? " + " : " ");
    out += m.vars[m.objective[i]].name;
  }
  if (m.objective.empty()) out += " 0 e_none";  // degenerate, not expected
  out += "\nSubject To\n";
  for (const auto& c : m.constraints) {
    if (c.kind == RowKind::binary_domain) continue;  // rendered in Bounds
    out += " " + c.name + ":";
    bool first = true;
    for (const auto& t : c.terms) {
      Rat a = t.coef;
      bool negative = a < Rat(0);
      if (negative) a = -a;
      out += first ? (negative ? " - " : " ") : (negative ? " - " : " + ");
      if (!(a == Rat(1))) out += num(a) + " ";
      out += m.vars[t.var].name;
      first = false;
    }
    out += (c.rel == '<') ? " <= " : " >= ";
    out += num(c.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& v : m.vars) {
    out += " " + num(v.lb) + " <= " + v.name;
    if (v.ub) out += " <= " + num(*v.ub);
    out += "\n";
  }
  bool any_binary = false;
  for (const auto& v : m.vars) any_binary = any_binary || v.binary;
  if (any_binary) {
    out += "Binaries\n";
    for (const auto& v : m.vars)
      if (v.binary) out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace busembed
