#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "busembed/core.hpp"
#include "busembed/dedupe.hpp"
#include "busembed/order_solver.hpp"

namespace busembed {

// DP state of the subset algorithm: discrete top-bus level h plus the set of
// colors already realized below it.
struct DpState {
  int h = 0;
  uint32_t colors = 0;
};

struct BepDpTable {
  std::vector<int> component_colors;          // global color ids
  std::unordered_map<uint32_t, int> min_top;  // mask -> minimal top slot
  int infinity;                               // sentinel for infeasible masks
};

struct BepResult {
  bool feasible = false;
  BusLayout layout;
  std::vector<int> order;  // bottom-to-top bus order used for the layout
  long long states_visited = 0;
  bool used_propagation_solver = false;
  // Set when the input violated general position and the solver worked on a
  // shifted copy; the layout refers to this instance.
  std::optional<ColoredPointSet> prepared;
  std::vector<BepDpTable> dp_tables;
};

namespace detail {

// ---- span/conflict structure shared by both solving strategies ----

struct SpanPoint {
  int rank;   // 1-based rank of the point in the global y-order
  int color;  // color of the point
  Rat y;
};

struct BepContext {
  const ColoredPointSet& inst;
  std::vector<Span> spans;
  std::vector<int> rank_of_point;               // 1..n by y
  std::vector<std::vector<SpanPoint>> in_span;  // foreign points per color
  std::vector<std::vector<int>> components;     // color groups
  std::vector<int> comp_of;

  explicit BepContext(const ColoredPointSet& instance) : inst(instance) {
    const int n = inst.n(), k = inst.k();
    spans = compute_spans(inst);

    std::vector<int> by_y(n);
    std::iota(by_y.begin(), by_y.end(), 0);
    std::sort(by_y.begin(), by_y.end(), [&](int a, int b) {
      return inst.points[a].y < inst.points[b].y;
    });
    rank_of_point.resize(n);
    for (int r = 0; r < n; ++r) rank_of_point[by_y[r]] = r + 1;

    in_span.resize(k);
    for (int i = 0; i < n; ++i) {
      const Point& p = inst.points[i];
      for (int c = 0; c < k; ++c)
        if (c != p.color && spans[c].contains(p.x))
          in_span[c].push_back({rank_of_point[i], p.color, p.y});
    }
    for (auto& v : in_span)
      std::sort(v.begin(), v.end(),
                [](const SpanPoint& a, const SpanPoint& b) {
                  return a.rank < b.rank;
                });

    // Colors whose spans overlap interact; group them. O(k^2) is fine at the
    // color counts the exact solver sees.
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (spans[a].overlaps(spans[b])) {
          int ra = find(a), rb = find(b);
          if (ra != rb) parent[ra] = rb;
        }
    comp_of.assign(k, -1);
    for (int c = 0; c < k; ++c) {
      int r = find(c);
      if (comp_of[r] < 0) {
        comp_of[r] = (int)components.size();
        components.emplace_back();
      }
      comp_of[c] = comp_of[r];
      components[comp_of[c]].push_back(c);
    }
  }
};

// ---- subset dynamic program over one component ----

class SubsetDp {
 public:
  SubsetDp(const BepContext& ctx, const std::vector<int>& colors)
      : ctx_(ctx), colors_(colors) {
    local_of_.assign(ctx.inst.k(), -1);
    for (int i = 0; i < (int)colors_.size(); ++i) local_of_[colors_[i]] = i;
  }

  static constexpr int kInf = std::numeric_limits<int>::max() / 2;

  // Minimal achievable slot of the topmost bus when realizing exactly the
  // colors in `mask`, honoring both the points of colors inside the mask
  // (from below) and the points of the component's remaining colors (from
  // above). kInf when no realization exists.
  int min_top(uint32_t mask) {
    if (mask == 0) return 0;
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    ++states_;
    int best = kInf;
    int best_color = -1;
    for (int i = 0; i < (int)colors_.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      int sub = min_top(mask & ~(1u << i));
      if (sub == kInf) continue;
      int low = h_low(i, mask);
      int v = std::max(sub, low);
      if (v < h_up(i, mask) && v < best) {
        best = v;
        best_color = i;
      }
    }
    memo_[mask] = best;
    choice_[mask] = best_color;
    return best;
  }

  // Bottom-to-top order of global color ids; only valid when feasible.
  std::vector<int> recover_order() {
    std::vector<int> rev;
    uint32_t mask = (colors_.size() == 32)
                        ? 0xffffffffu
                        : ((1u << colors_.size()) - 1);
    while (mask) {
      int c = choice_.at(mask);
      rev.push_back(colors_[c]);
      mask &= ~(1u << c);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

  long long states() const { return states_; }
  const std::unordered_map<uint32_t, int>& table() const { return memo_; }

 private:
  const BepContext& ctx_;
  std::vector<int> colors_;
  std::vector<int> local_of_;
  std::unordered_map<uint32_t, int> memo_;
  std::unordered_map<uint32_t, int> choice_;
  long long states_ = 0;

  // Topmost foreign point of a mask color inside the span: the bus must clear
  // it from above.
  int h_low(int local, uint32_t mask) const {
    const auto& pts = ctx_.in_span[colors_[local]];
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      int l = local_of_[it->color];
      if (l >= 0 && (mask & (1u << l))) return it->rank;
    }
    return 0;
  }
  // Bottommost foreign point of a not-yet-placed color inside the span: the
  // bus must stay below it or that point's connection to its higher bus gets
  // crossed.
  int h_up(int local, uint32_t mask) const {
    const auto& pts = ctx_.in_span[colors_[local]];
    for (const auto& sp : pts) {
      int l = local_of_[sp.color];
      if (l >= 0 && !(mask & (1u << l))) return sp.rank;
    }
    return kInf;
  }
};

// ---- branch-and-propagate solver for many colors or epsilon > 0 ----
//
// Decision variables are the relative orders of conflicting color pairs.
// Deciding a pair turns its planarity disjunctions into interval bounds on
// the two bus coordinates; bounds propagate along decided pairs. A full
// consistent assignment is materialized greedily bottom-up.

class PropagationSolver {
 public:
  PropagationSolver(const BepContext& ctx, const Rat& epsilon)
      : ctx_(ctx), eps_(epsilon), k_(ctx.inst.k()) {}

  struct Outcome {
    bool feasible = false;
    BusLayout layout;
    long long nodes = 0;
  };

  Outcome run() {
    build_pairs();
    lo_.assign(k_, Bound::minus_inf());
    hi_.assign(k_, Bound::plus_inf());
    decided_.assign(pairs_.size(), 0);
    Outcome out;
    out.feasible = search(out);
    out.nodes = nodes_;
    return out;
  }

 private:
  // value + count of strict steps above it ("v plus b infinitesimals")
  struct Bound {
    Rat v;
    int steps = 0;
    bool inf_neg = false, inf_pos = false;
    static Bound minus_inf() { Bound b; b.inf_neg = true; return b; }
    static Bound plus_inf() { Bound b; b.inf_pos = true; return b; }
    bool operator<(const Bound& o) const {
      if (inf_neg || o.inf_pos) return !(o.inf_neg || inf_pos);
      if (inf_pos || o.inf_neg) return false;
      if (v != o.v) return v < o.v;
      return steps < o.steps;
    }
  };

  struct PairVar {
    int a, b;                  // color pair, a < b
    std::vector<int> pts_ab;   // points of color b inside span(a)
    std::vector<int> pts_ba;   // points of color a inside span(b)
    Rat max_ab, min_ab;        // extremes of pts_ab y values
    Rat max_ba, min_ba;
  };

  const BepContext& ctx_;
  Rat eps_;
  int k_;
  std::vector<PairVar> pairs_;
  std::vector<int8_t> decided_;  // 0 undecided, +1: a above b, -1: b above a
  std::vector<Bound> lo_, hi_;   // strict bounds per color
  long long nodes_ = 0;

  struct TrailEntry {
    int color;
    Bound old_lo, old_hi;
  };

  void build_pairs() {
    std::map<std::pair<int, int>, PairVar> acc;
    for (int i = 0; i < ctx_.inst.n(); ++i) {
      const Point& p = ctx_.inst.points[i];
      for (int c = 0; c < k_; ++c) {
        if (c == p.color || !ctx_.spans[c].contains(p.x)) continue;
        int a = std::min(c, p.color), b = std::max(c, p.color);
        auto& pv = acc[{a, b}];
        pv.a = a;
        pv.b = b;
        // conflict (p, c): p belongs to the other color of the pair
        if (c == a)
          pv.pts_ba.push_back(i);  // point of color b in span(a)
        else
          pv.pts_ab.push_back(i);  // point of color a in span(b)
      }
    }
    // pts naming: pts_ab are points constraining bus b?  Normalize below.
    for (auto& [key, pv] : acc) {
      auto extremes = [&](const std::vector<int>& pts, Rat& mx, Rat& mn) {
        for (size_t j = 0; j < pts.size(); ++j) {
          const Rat& y = ctx_.inst.points[pts[j]].y;
          if (j == 0) { mx = mn = y; }
          else { mx = std::max(mx, y); mn = std::min(mn, y); }
        }
      };
      extremes(pv.pts_ab, pv.max_ab, pv.min_ab);
      extremes(pv.pts_ba, pv.max_ba, pv.min_ba);
      pairs_.push_back(pv);
    }
    // deterministic, most-constrained first
    std::sort(pairs_.begin(), pairs_.end(),
              [](const PairVar& x, const PairVar& y) {
                size_t cx = x.pts_ab.size() + x.pts_ba.size();
                size_t cy = y.pts_ab.size() + y.pts_ba.size();
                if (cx != cy) return cx > cy;
                if (x.a != y.a) return x.a < y.a;
                return x.b < y.b;
              });
  }

  static Bound raise_strict(const Rat& v) {  // bound "y > v"
    Bound b;
    b.v = v;
    b.steps = 1;
    return b;
  }
  static Bound lower_strict(const Rat& v) {  // bound "y < v"
    Bound b;
    b.v = v;
    b.steps = -1;
    return b;
  }

  bool empty_interval(int c) const { return !(lo_[c] < hi_[c]); }

  // Applies the bound tightenings of deciding pair pv with orientation
  // a_above; records old bounds on the trail. Returns false on wipeout.
  bool apply(const PairVar& pv, bool a_above, std::vector<TrailEntry>& trail) {
    int up = a_above ? pv.a : pv.b;
    int dn = a_above ? pv.b : pv.a;
    const std::vector<int>& up_pts = a_above ? pv.pts_ba : pv.pts_ab;
    const std::vector<int>& dn_pts = a_above ? pv.pts_ab : pv.pts_ba;
    // bus `up` goes above every conflict point of color dn in its span, and
    // bus `dn` below every conflict point of color up in its span
    bool ok = true;
    if (!up_pts.empty()) {
      Rat mx = ctx_.inst.points[up_pts[0]].y;
      for (int i : up_pts) mx = std::max(mx, ctx_.inst.points[i].y);
      ok = tighten_lo(up, raise_strict(mx), trail) && ok;
    }
    if (!dn_pts.empty()) {
      Rat mn = ctx_.inst.points[dn_pts[0]].y;
      for (int i : dn_pts) mn = std::min(mn, ctx_.inst.points[i].y);
      ok = tighten_hi(dn, lower_strict(mn), trail) && ok;
    }
    // y(up) > y(dn): exchange bound information one step
    if (ok) {
      Bound b = lo_[dn];
      if (!b.inf_neg) { b.steps += 1; ok = tighten_lo(up, b, trail) && ok; }
    }
    if (ok) {
      Bound b = hi_[up];
      if (!b.inf_pos) { b.steps -= 1; ok = tighten_hi(dn, b, trail) && ok; }
    }
    return ok;
  }

  bool tighten_lo(int c, const Bound& b, std::vector<TrailEntry>& trail) {
    if (!(lo_[c] < b)) return !empty_interval(c);
    trail.push_back({c, lo_[c], hi_[c]});
    lo_[c] = b;
    return !empty_interval(c);
  }
  bool tighten_hi(int c, const Bound& b, std::vector<TrailEntry>& trail) {
    if (!(b < hi_[c])) return !empty_interval(c);
    trail.push_back({c, lo_[c], hi_[c]});
    hi_[c] = b;
    return !empty_interval(c);
  }

  void undo(std::vector<TrailEntry>& trail, size_t mark) {
    while (trail.size() > mark) {
      const TrailEntry& e = trail.back();
      lo_[e.color] = e.old_lo;
      hi_[e.color] = e.old_hi;
      trail.pop_back();
    }
  }

  // A pair orientation is clearly impossible when the implied point bounds
  // already wipe out an interval.
  bool orientation_possible(const PairVar& pv, bool a_above) const {
    int up = a_above ? pv.a : pv.b;
    int dn = a_above ? pv.b : pv.a;
    const std::vector<int>& up_pts = a_above ? pv.pts_ba : pv.pts_ab;
    const std::vector<int>& dn_pts = a_above ? pv.pts_ab : pv.pts_ba;
    if (!up_pts.empty()) {
      Rat mx = ctx_.inst.points[up_pts[0]].y;
      for (int i : up_pts) mx = std::max(mx, ctx_.inst.points[i].y);
      if (!(raise_strict(mx) < hi_[up]) && !(hi_[up].inf_pos)) return false;
    }
    if (!dn_pts.empty()) {
      Rat mn = ctx_.inst.points[dn_pts[0]].y;
      for (int i : dn_pts) mn = std::min(mn, ctx_.inst.points[i].y);
      if (!(lo_[dn] < lower_strict(mn)) && !(lo_[dn].inf_neg)) return false;
    }
    if (!(lo_[dn] < hi_[up])) return false;
    return true;
  }

  bool search(Outcome& out) {
    ++nodes_;
    std::vector<TrailEntry> trail;
    std::vector<int> forced_pairs;
    if (!propagate(trail, forced_pairs)) {
      undo_all(trail, forced_pairs);
      return false;
    }
    int pick = -1;
    for (int i = 0; i < (int)pairs_.size(); ++i)
      if (decided_[i] == 0) { pick = i; break; }
    if (pick < 0) {
      bool ok = materialize(out);
      if (!ok) undo_all(trail, forced_pairs);
      return ok;
    }
    for (int orient = 0; orient < 2; ++orient) {
      bool a_above = orient == 0;
      std::vector<TrailEntry> t2;
      decided_[pick] = a_above ? 1 : -1;
      if (apply(pairs_[pick], a_above, t2) && search(out)) return true;
      undo(t2, 0);
      decided_[pick] = 0;
    }
    undo_all(trail, forced_pairs);
    return false;
  }

  bool propagate(std::vector<TrailEntry>& trail,
                 std::vector<int>& forced_pairs) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < (int)pairs_.size(); ++i) {
        if (decided_[i] != 0) continue;
        bool can_a = orientation_possible(pairs_[i], true);
        bool can_b = orientation_possible(pairs_[i], false);
        if (!can_a && !can_b) return false;
        if (can_a != can_b) {
          decided_[i] = can_a ? 1 : -1;
          forced_pairs.push_back(i);
          if (!apply(pairs_[i], can_a, trail)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  void undo_all(std::vector<TrailEntry>& trail,
                std::vector<int>& forced_pairs) {
    undo(trail, 0);
    for (int i : forced_pairs) decided_[i] = 0;
  }

  // Greedy bottom-up materialization of a fully decided pair set. Buses are
  // placed minimally in topological order of the "above" relation, lifted
  // over epsilon bands, and checked against their upper bounds.
  bool materialize(Outcome& out) {
    const int n = ctx_.inst.n();
    // edges dn -> up
    std::vector<std::vector<int>> above(k_);
    std::vector<int> indeg(k_, 0);
    for (int i = 0; i < (int)pairs_.size(); ++i) {
      int up = decided_[i] == 1 ? pairs_[i].a : pairs_[i].b;
      int dn = decided_[i] == 1 ? pairs_[i].b : pairs_[i].a;
      above[dn].push_back(up);
      ++indeg[up];
    }
    std::vector<int> topo;
    std::vector<int> q;
    for (int c = 0; c < k_; ++c)
      if (indeg[c] == 0) q.push_back(c);
    while (!q.empty()) {
      int c = q.back();
      q.pop_back();
      topo.push_back(c);
      for (int u : above[c])
        if (--indeg[u] == 0) q.push_back(u);
    }
    if ((int)topo.size() != k_) return false;  // order cycle

    // infinitesimal eta realized as a concrete rational smaller than any
    // relevant coordinate gap divided by the longest possible chain
    Rat eta = smallest_gap() / Rat(2 * (k_ + 2));

    std::vector<Rat> lo_pt(k_), hi_pt(k_);
    std::vector<bool> has_lo(k_, false), has_hi(k_, false);
    for (int i = 0; i < (int)pairs_.size(); ++i) {
      const PairVar& pv = pairs_[i];
      int up = decided_[i] == 1 ? pv.a : pv.b;
      int dn = decided_[i] == 1 ? pv.b : pv.a;
      const std::vector<int>& up_pts = decided_[i] == 1 ? pv.pts_ba : pv.pts_ab;
      const std::vector<int>& dn_pts = decided_[i] == 1 ? pv.pts_ab : pv.pts_ba;
      for (int pi : up_pts) {
        const Rat& y = ctx_.inst.points[pi].y;
        if (!has_lo[up] || lo_pt[up] < y) { lo_pt[up] = y; has_lo[up] = true; }
      }
      for (int pi : dn_pts) {
        const Rat& y = ctx_.inst.points[pi].y;
        if (!has_hi[dn] || y < hi_pt[dn]) { hi_pt[dn] = y; has_hi[dn] = true; }
      }
    }

    std::vector<std::vector<Rat>> own_levels(k_);
    for (int i = 0; i < n; ++i)
      own_levels[ctx_.inst.points[i].color].push_back(ctx_.inst.points[i].y);

    Rat global_min = ctx_.inst.points[0].y;
    for (const auto& p : ctx_.inst.points) global_min = std::min(global_min, p.y);

    std::vector<Rat> y(k_);
    std::vector<bool> placed(k_, false);
    for (int c : topo) {
      Rat cand = global_min - Rat(1);
      if (has_lo[c]) cand = std::max(cand, lo_pt[c] + eta);
      for (int i = 0; i < (int)pairs_.size(); ++i) {
        int up = decided_[i] == 1 ? pairs_[i].a : pairs_[i].b;
        int dn = decided_[i] == 1 ? pairs_[i].b : pairs_[i].a;
        if (up == c && placed[dn]) cand = std::max(cand, y[dn] + eta);
      }
      if (eps_ > Rat(0)) {
        for (bool moved = true; moved;) {
          moved = false;
          for (const Rat& py : own_levels[c])
            if ((cand - py).abs() < eps_) { cand = py + eps_; moved = true; }
        }
      }
      if (has_hi[c] && !(cand < hi_pt[c])) return false;
      y[c] = cand;
      placed[c] = true;
    }
    out.layout.bus_y = std::move(y);
    if (!validate_planarity(ctx_.inst, out.layout, EpsilonPolicy(eps_)).empty())
      throw Error("internal: propagation solver produced an invalid layout");
    return true;
  }

  Rat smallest_gap() const {
    std::vector<Rat> vals;
    for (const auto& p : ctx_.inst.points) {
      vals.push_back(p.y);
      if (eps_ > Rat(0)) {
        vals.push_back(p.y + eps_);
        vals.push_back(p.y - eps_);
      }
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    Rat best(1);
    for (size_t i = 1; i < vals.size(); ++i)
      best = std::min(best, vals[i] - vals[i - 1]);
    return best;
  }
};

}  // namespace detail

// Solve general BEP (optionally with a minimum own-point distance epsilon).
// Components of span-overlapping colors are handled independently; small
// components at epsilon = 0 run the subset DP, everything else the
// branch-and-propagate solver.
inline BepResult solve_bep(const ColoredPointSet& input,
                           const EpsilonPolicy& eps = {},
                           int dp_color_cap = 16) {
  BepResult res;
  const ColoredPointSet* inst = &input;
  if (!input.general_position()) {
    res.prepared = dedupe_coordinates(input);
    inst = &*res.prepared;
  }
  if (inst->k() == 0) { res.feasible = true; return res; }

  detail::BepContext ctx(*inst);

  bool all_dp = eps.epsilon == Rat(0);
  if (all_dp)
    for (const auto& comp : ctx.components)
      if ((int)comp.size() > dp_color_cap) { all_dp = false; break; }

  if (all_dp) {
    std::vector<int> order;
    for (const auto& comp : ctx.components) {
      detail::SubsetDp dp(ctx, comp);
      uint32_t full = comp.size() == 32 ? 0xffffffffu
                                        : ((1u << comp.size()) - 1);
      int top = dp.min_top(full);
      res.states_visited += dp.states();
      BepDpTable table;
      table.component_colors = comp;
      table.min_top = dp.table();
      table.infinity = detail::SubsetDp::kInf;
      res.dp_tables.push_back(std::move(table));
      if (top == detail::SubsetDp::kInf) { res.feasible = false; return res; }
      auto comp_order = dp.recover_order();
      order.insert(order.end(), comp_order.begin(), comp_order.end());
    }
    auto placed = solve_with_order(*inst, BusOrder{order}, eps);
    if (!placed.feasible)
      throw Error("internal: DP order rejected by the order solver");
    res.feasible = true;
    res.layout = std::move(placed.layout);
    res.order = std::move(order);
    return res;
  }

  detail::PropagationSolver cp(ctx, eps.epsilon);
  auto out = cp.run();
  res.used_propagation_solver = true;
  res.states_visited = out.nodes;
  res.feasible = out.feasible;
  if (out.feasible) {
    res.layout = std::move(out.layout);
    std::vector<int> order(inst->k());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return res.layout.bus_y[a] < res.layout.bus_y[b];
    });
    res.order = std::move(order);
  }
  return res;
}

// Reference decision procedure: try every bus order. Refuses beyond the cap.
inline BepResult enumerate_orders_oracle(const ColoredPointSet& input,
                                         const EpsilonPolicy& eps = {},
                                         int color_cap = 8) {
  BepResult res;
  const ColoredPointSet* inst = &input;
  if (!input.general_position()) {
    res.prepared = dedupe_coordinates(input);
    inst = &*res.prepared;
  }
  if (inst->k() > color_cap)
    throw Error("enumerate_orders_oracle: " + std::to_string(inst->k()) +
                " colors exceed the cap of " + std::to_string(color_cap));
  std::vector<int> perm(inst->k());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    ++res.states_visited;
    auto r = solve_with_order(*inst, BusOrder{perm}, eps);
    if (r.feasible) {
      res.feasible = true;
      res.layout = std::move(r.layout);
      res.order = perm;
      return res;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  res.feasible = false;
  return res;
}

struct OrderInfeasibleError : Error {
  OrderWitness witness;
  explicit OrderInfeasibleError(OrderWitness w)
      : Error("order admits no planar layout (point " +
              std::to_string(w.point) + " vs bus " + std::to_string(w.color) +
              ")"),
        witness(w) {}
};

struct InkResult {
  BusLayout layout;
  Rat total_ink;
};

// Minimal-ink layout among layouts resolving every conflict pair according
// to the given bottom-to-top order. Exhaustive search over the candidate
// grid (point levels, one placement unit around them, epsilon offsets, and
// chained just-above positions), with cost pruning.
inline InkResult minimize_ink(const ColoredPointSet& inst,
                              const BusOrder& order,
                              const EpsilonPolicy& eps = {}) {
  auto ordered = solve_with_order(inst, order, eps);
  if (!ordered.feasible) throw OrderInfeasibleError(ordered.witness);

  const int k = inst.k();
  auto spans = compute_spans(inst);
  PlacementGrid grid(inst);
  const Rat& unit = grid.unit;

  std::vector<Rat> cand;
  for (const auto& p : inst.points) {
    cand.push_back(p.y);
    cand.push_back(p.y + unit);
    cand.push_back(p.y - unit);
    if (eps.epsilon > Rat(0)) {
      cand.push_back(p.y + eps.epsilon);
      cand.push_back(p.y - eps.epsilon);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[order.colors[i]] = i;

  // static strict bounds induced by the order and the conflict matrix
  std::vector<std::optional<Rat>> lb(k), ub(k);
  std::vector<std::vector<int>> lower_conflicts(k);  // colors below, conflicting
  auto conflicts = conflicting_pairs(inst);
  for (auto [pi, c] : conflicts.pairs) {
    int cp = inst.points[pi].color;
    const Rat& py = inst.points[pi].y;
    if (pos[c] > pos[cp]) {
      if (!lb[c] || *lb[c] < py) lb[c] = py;
    } else {
      if (!ub[c] || py < *ub[c]) ub[c] = py;
    }
    if (pos[c] > pos[cp]) lower_conflicts[c].push_back(cp);
  }
  for (auto& v : lower_conflicts) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<std::vector<Rat>> own_levels(k);
  for (const auto& p : inst.points) own_levels[p.color].push_back(p.y);
  std::vector<int> own_count(k, 0);
  for (const auto& p : inst.points) ++own_count[p.color];

  auto color_cost = [&](int c, const Rat& y) {
    Rat s(0);
    for (const Rat& py : own_levels[c]) s += (y - py).abs();
    return s;
  };
  auto band_ok = [&](int c, const Rat& y) {
    if (eps.epsilon == Rat(0)) return true;
    for (const Rat& py : own_levels[c])
      if ((y - py).abs() < eps.epsilon) return false;
    return true;
  };

  std::vector<Rat> chosen(k);
  std::optional<InkResult> best;
  Rat acc(0);

  std::function<void(int)> dfs = [&](int step) {
    if (best && !(acc < best->total_ink)) return;
    if (step == k) {
      BusLayout layout{chosen};
      best = InkResult{layout, acc};
      return;
    }
    int c = order.colors[step];
    Rat strict_low;  // candidate must be strictly above this when present
    bool has_low = false;
    if (lb[c]) { strict_low = *lb[c]; has_low = true; }
    for (int cp : lower_conflicts[c]) {
      if (!has_low || strict_low < chosen[cp]) strict_low = chosen[cp];
      has_low = true;
    }
    std::vector<Rat> options;
    for (const Rat& g : cand) {
      if (has_low && !(g > strict_low)) continue;
      if (ub[c] && !(g < *ub[c])) continue;
      options.push_back(g);
    }
    if (has_low) {
      Rat chained = strict_low + unit;
      if ((!ub[c] || chained < *ub[c]) &&
          !std::binary_search(cand.begin(), cand.end(), chained))
        options.push_back(chained);
    }
    for (const Rat& g : options) {
      if (!band_ok(c, g)) continue;
      Rat cost = color_cost(c, g);
      chosen[c] = g;
      acc += cost;
      dfs(step + 1);
      acc -= cost;
    }
  };
  dfs(0);

  if (!best)
    throw Error("minimize_ink: no grid layout found for a feasible order");
  // the search space is restricted to order-consistent layouts; double-check
  auto report = validate_planarity(inst, best->layout, eps);
  if (!report.empty())
    throw Error("minimize_ink: internal validation failure");
  return *best;
}

// Capped global minimization: best minimize_ink over all feasible orders.
inline InkResult minimize_ink_global(const ColoredPointSet& inst,
                                     const EpsilonPolicy& eps = {},
                                     int color_cap = 8) {
  if (inst.k() > color_cap)
    throw Error("minimize_ink_global: too many colors");
  std::vector<int> perm(inst.k());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<InkResult> best;
  do {
    auto r = solve_with_order(inst, BusOrder{perm}, eps);
    if (!r.feasible) continue;
    auto ink_r = minimize_ink(inst, BusOrder{perm}, eps);
    if (!best || ink_r.total_ink < best->total_ink) best = std::move(ink_r);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!best) throw Error("minimize_ink_global: instance is infeasible");
  return *best;
}

}  // namespace busembed
