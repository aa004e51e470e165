#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "busembed/core.hpp"
#include "busembed/dedupe.hpp"
#include "busembed/order_solver.hpp"

namespace busembed {

struct SweepResult {
  bool feasible = false;
  BusLayout layout;
  std::vector<int> residue;  // active points left when the sweep gets stuck
  std::vector<int> removal_order;  // colors in removal order (bottom-up)
  long long operations = 0;        // inserts + removals, <= 2n
  std::optional<ColoredPointSet> prepared;
};

// Bottom-to-top sweep for the all-buses-strictly-above-their-points variant.
// Points enter an x-sorted active sequence; a color leaves as soon as all of
// its points are present and contiguous. Feasible iff the sequence drains.
inline SweepResult solve_sqcap(const ColoredPointSet& input) {
  SweepResult res;
  const ColoredPointSet* pinst = &input;
  if (!input.general_position()) {
    res.prepared = dedupe_coordinates(input);
    pinst = &*res.prepared;
  }
  const ColoredPointSet& inst = *pinst;
  const int n = inst.n(), k = inst.k();
  if (n == 0) { res.feasible = true; return res; }

  compute_spans(inst);  // rejects empty color classes
  PlacementGrid grid(inst);
  Rat delta = grid.unit / Rat(k + 1);

  std::vector<int> total(k, 0), seen(k, 0), active_cnt(k, 0), adjacent(k, 0);
  for (const auto& p : inst.points) ++total[p.color];

  using Entry = std::pair<Rat, int>;  // (x, point index)
  std::set<Entry> active;
  std::vector<std::optional<std::set<Entry>::iterator>> rep(k);

  std::vector<int> by_y(n);
  std::iota(by_y.begin(), by_y.end(), 0);
  std::sort(by_y.begin(), by_y.end(), [&](int a, int b) {
    return inst.points[a].y < inst.points[b].y;
  });

  res.layout.bus_y.assign(k, Rat(0));
  std::vector<bool> placed(k, false);

  std::deque<int> worklist;
  auto color_at = [&](std::set<Entry>::iterator it) {
    return inst.points[it->second].color;
  };

  auto removable = [&](int c) {
    return !placed[c] && seen[c] == total[c] && active_cnt[c] == total[c] &&
           adjacent[c] == total[c] - 1;
  };

  auto remove_run = [&](int c, const Rat& trigger_y, int cascade_index) {
    auto it = *rep[c];
    while (it != active.begin()) {
      auto prev = std::prev(it);
      if (color_at(prev) != c) break;
      it = prev;
    }
    std::vector<std::set<Entry>::iterator> run;
    auto cur = it;
    while (cur != active.end() && color_at(cur) == c) {
      run.push_back(cur);
      ++cur;
    }
    // the removability test guarantees the run is the whole color
    if ((int)run.size() != total[c])
      throw Error("internal: sweep simplification lost contiguity");
    auto before = it == active.begin() ? active.end() : std::prev(it);
    auto after = cur;
    for (auto r : run) active.erase(r);
    res.operations += (long long)run.size();
    active_cnt[c] = 0;
    adjacent[c] = 0;
    rep[c].reset();
    placed[c] = true;
    res.layout.bus_y[c] = trigger_y + delta * Rat(cascade_index);
    res.removal_order.push_back(c);
    if (before != active.end() && after != active.end()) {
      int cb = color_at(before), ca = color_at(after);
      if (cb == ca) ++adjacent[cb];
      worklist.push_back(cb);
      worklist.push_back(ca);
    }
  };

  for (int idx : by_y) {
    const Point& p = inst.points[idx];
    auto [it, ok] = active.insert({p.x, idx});
    ++res.operations;
    int c = p.color;
    ++seen[c];
    ++active_cnt[c];
    rep[c] = it;
    if (it != active.begin()) {
      auto l = std::prev(it);
      auto r = std::next(it);
      if (r != active.end() && color_at(l) == color_at(r))
        --adjacent[color_at(l)];
    }
    if (it != active.begin() && color_at(std::prev(it)) == c) ++adjacent[c];
    if (auto nx = std::next(it); nx != active.end() && color_at(nx) == c)
      ++adjacent[c];
    worklist.clear();
    worklist.push_back(c);
    if (it != active.begin()) worklist.push_back(color_at(std::prev(it)));
    if (auto nx = std::next(it); nx != active.end())
      worklist.push_back(color_at(nx));

    int cascade = 0;
    while (!worklist.empty()) {
      int wc = worklist.front();
      worklist.pop_front();
      if (removable(wc)) remove_run(wc, p.y, ++cascade);
    }
  }

  if (!active.empty()) {
    res.feasible = false;
    for (const auto& [x, idx] : active) res.residue.push_back(idx);
    return res;
  }
  res.feasible = true;
  return res;
}

// Mirror variant: every bus strictly below its points.
inline SweepResult solve_sqcup(const ColoredPointSet& input) {
  ColoredPointSet flipped = input;
  for (auto& p : flipped.points) p.y = -p.y;
  SweepResult r = solve_sqcap(flipped);
  if (r.feasible)
    for (auto& y : r.layout.bus_y) y = -y;
  if (r.prepared)
    for (auto& p : r.prepared->points) p.y = -p.y;
  return r;
}

// Bottommost placement for a fixed order with every bus forced strictly
// above its own points; reference procedure for the sweep.
struct RestrictedOrderResult {
  bool feasible = false;
  BusLayout layout;
  Rat ideal_ink;  // ink with all placement offsets dropped
};

inline RestrictedOrderResult sqcap_order_solve(const ColoredPointSet& inst,
                                               const BusOrder& order) {
  if (!is_permutation_of_colors(inst, order))
    throw std::invalid_argument("order is not a permutation of the colors");
  if (!inst.general_position())
    throw Error("sqcap_order_solve requires general position");
  const int n = inst.n(), k = inst.k();
  auto spans = compute_spans(inst);
  PlacementGrid grid(inst);
  const Rat& unit = grid.unit;

  std::vector<std::vector<int>> points_of(k);
  for (int i = 0; i < n; ++i) points_of[inst.points[i].color].push_back(i);

  RestrictedOrderResult res;
  res.layout.bus_y.assign(k, Rat(0));
  res.ideal_ink = Rat(0);
  std::vector<bool> done(k, false);
  Rat prev_actual(0);
  bool have_prev = false;

  for (int c : order.colors) {
    Rat own_top = inst.points[points_of[c][0]].y;
    for (int i : points_of[c]) own_top = std::max(own_top, inst.points[i].y);
    Rat block = own_top;
    for (int i = 0; i < n; ++i) {
      const Point& q = inst.points[i];
      if (!done[q.color] || q.color == c) continue;
      if (spans[c].contains(q.x)) block = std::max(block, q.y);
    }
    Rat actual = block + unit;
    if (have_prev) actual = std::max(actual, prev_actual + unit);
    // a foreign point above the bus inside the span will connect upward
    // through it later; the order cannot work
    for (int i = 0; i < n; ++i) {
      const Point& q = inst.points[i];
      if (q.color == c || done[q.color]) continue;
      if (spans[c].contains(q.x) && q.y < actual) {
        res.feasible = false;
        return res;
      }
    }
    res.layout.bus_y[c] = actual;
    for (int i : points_of[c]) res.ideal_ink += block - inst.points[i].y;
    done[c] = true;
    prev_actual = actual;
    have_prev = true;
  }
  res.feasible = true;
  return res;
}

// Exhaustive order search in the restricted model; usable up to ~8 colors.
inline std::optional<RestrictedOrderResult> sqcap_brute_force(
    const ColoredPointSet& inst) {
  std::vector<int> perm(inst.k());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<RestrictedOrderResult> best;
  do {
    auto r = sqcap_order_solve(inst, BusOrder{perm});
    if (r.feasible && (!best || r.ideal_ink < best->ideal_ink)) best = r;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace busembed
