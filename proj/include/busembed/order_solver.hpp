#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "busembed/core.hpp"

namespace busembed {

// Bottom-to-top order of the buses; a permutation of the color set.
struct BusOrder {
  std::vector<int> colors;
};

inline BusOrder parse_order(const ColoredPointSet& inst,
                            const std::vector<std::string>& names) {
  BusOrder order;
  for (const auto& name : names) {
    int c = -1;
    for (int i = 0; i < inst.k(); ++i)
      if (inst.color_names[i] == name) { c = i; break; }
    if (c < 0) throw std::invalid_argument("unknown color in order: " + name);
    order.colors.push_back(c);
  }
  return order;
}

inline bool is_permutation_of_colors(const ColoredPointSet& inst,
                                     const BusOrder& order) {
  if ((int)order.colors.size() != inst.k()) return false;
  std::vector<bool> seen(inst.k(), false);
  for (int c : order.colors) {
    if (c < 0 || c >= inst.k() || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

// Discrete placement grid: one unit is 1/n of the smallest vertical distance
// between consecutive distinct point levels.
struct PlacementGrid {
  Rat unit;
  explicit PlacementGrid(const ColoredPointSet& inst)
      : unit(placement_unit(inst)) {}
};

namespace detail {

// Segment tree over x-ranks: point assign, range maximum. Empty positions
// rank below everything.
class RangeMaxTree {
 public:
  explicit RangeMaxTree(int n) : n_(std::max(n, 1)) {
    size_ = 1;
    while (size_ < n_) size_ <<= 1;
    has_.assign(2 * size_, false);
    val_.assign(2 * size_, Rat(0));
  }
  void assign(int i, const Rat& v) {
    i += size_;
    has_[i] = true;
    val_[i] = v;
    for (i >>= 1; i >= 1; i >>= 1) pull(i);
  }
  std::optional<Rat> range_max(int lo, int hi) const {  // inclusive
    std::optional<Rat> best;
    if (lo > hi) return best;
    int l = lo + size_, r = hi + size_ + 1;
    while (l < r) {
      if (l & 1) { merge(best, l); ++l; }
      if (r & 1) { --r; merge(best, r); }
      l >>= 1;
      r >>= 1;
    }
    return best;
  }

 private:
  int n_, size_;
  std::vector<bool> has_;
  std::vector<Rat> val_;
  void pull(int i) {
    has_[i] = has_[2 * i] || has_[2 * i + 1];
    if (has_[2 * i] && has_[2 * i + 1])
      val_[i] = std::max(val_[2 * i], val_[2 * i + 1]);
    else if (has_[2 * i])
      val_[i] = val_[2 * i];
    else if (has_[2 * i + 1])
      val_[i] = val_[2 * i + 1];
  }
  void merge(std::optional<Rat>& best, int node) const {
    if (!has_[node]) return;
    if (!best || *best < val_[node]) best = val_[node];
  }
};

// Interval stabbing with monotonically increasing assigned values: range
// assign, point query max. Stores the color of the highest bus covering a
// position.
class BusStabTree {
 public:
  explicit BusStabTree(int n) : n_(std::max(n, 1)) {
    size_ = 1;
    while (size_ < n_) size_ <<= 1;
    has_.assign(2 * size_, false);
    val_.assign(2 * size_, Rat(0));
    color_.assign(2 * size_, -1);
  }
  // Values must not decrease across calls; later buses sit higher.
  void cover(int lo, int hi, const Rat& y, int color) {
    int l = lo + size_, r = hi + size_ + 1;
    while (l < r) {
      if (l & 1) { put(l, y, color); ++l; }
      if (r & 1) { --r; put(r, y, color); }
      l >>= 1;
      r >>= 1;
    }
  }
  struct Hit { Rat y; int color; };
  std::optional<Hit> query(int i) const {
    std::optional<Hit> best;
    for (i += size_; i >= 1; i >>= 1)
      if (has_[i] && (!best || best->y < val_[i]))
        best = Hit{val_[i], color_[i]};
    return best;
  }

 private:
  int n_, size_;
  std::vector<bool> has_;
  std::vector<Rat> val_;
  std::vector<int> color_;
  void put(int i, const Rat& y, int c) {
    has_[i] = true;
    val_[i] = y;
    color_[i] = c;
  }
};

}  // namespace detail

// Lowest candidate position above all processed points in the span and above
// the floor, then advanced past epsilon-forbidden bands around own-color
// levels and off any foreign point level inside the span.
inline Rat lowest_feasible_y(const detail::RangeMaxTree& processed,
                             int rank_lo, int rank_hi, const Rat& floor_y,
                             const Rat& unit, const Rat& epsilon,
                             const std::vector<Rat>& own_levels,
                             const std::vector<Rat>& foreign_levels_in_span) {
  Rat cand = floor_y;
  if (auto blocked = processed.range_max(rank_lo, rank_hi))
    cand = std::max(cand, *blocked + unit);
  if (epsilon == Rat(0)) return cand;
  for (bool moved = true; moved;) {
    moved = false;
    for (const Rat& y : own_levels) {
      if ((cand - y).abs() < epsilon) {
        cand = y + epsilon;
        moved = true;
      }
    }
    for (const Rat& y : foreign_levels_in_span) {
      if (cand == y) {  // a bus through a foreign point is a crossing
        cand += unit;
        moved = true;
      }
    }
  }
  return cand;
}

struct OrderWitness {
  int point = -1;  // point whose connection unavoidably crosses a lower bus
  int color = -1;  // the crossed bus
};

struct OrderSolveResult {
  bool feasible = false;
  BusLayout layout;
  OrderWitness witness;
};

// Tests whether a solution respecting the given bottom-to-top bus order
// exists and builds the bottommost such layout. Requires general position.
inline OrderSolveResult solve_with_order(const ColoredPointSet& inst,
                                         const BusOrder& order,
                                         const EpsilonPolicy& eps = {}) {
  if (!is_permutation_of_colors(inst, order))
    throw std::invalid_argument("order is not a permutation of the colors");
  if (!inst.general_position())
    throw Error("solve_with_order requires general position");

  const int n = inst.n(), k = inst.k();
  auto spans = compute_spans(inst);
  PlacementGrid grid(inst);
  const Rat& unit = grid.unit;

  std::vector<int> by_x(n);
  for (int i = 0; i < n; ++i) by_x[i] = i;
  std::sort(by_x.begin(), by_x.end(), [&](int a, int b) {
    return inst.points[a].x < inst.points[b].x;
  });
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[by_x[r]] = r;
  std::vector<Rat> xs_sorted(n);
  for (int r = 0; r < n; ++r) xs_sorted[r] = inst.points[by_x[r]].x;
  auto rank_range = [&](const Span& s) {
    int lo = (int)(std::lower_bound(xs_sorted.begin(), xs_sorted.end(),
                                    s.x_left) - xs_sorted.begin());
    int hi = (int)(std::upper_bound(xs_sorted.begin(), xs_sorted.end(),
                                    s.x_right) - xs_sorted.begin()) - 1;
    return std::pair<int, int>(lo, hi);
  };

  std::vector<std::vector<int>> points_of(k);
  Rat min_y = inst.points[0].y;
  for (int i = 0; i < n; ++i) {
    points_of[inst.points[i].color].push_back(i);
    min_y = std::min(min_y, inst.points[i].y);
  }

  detail::RangeMaxTree processed(n);
  detail::BusStabTree buses(n);

  OrderSolveResult res;
  res.layout.bus_y.assign(k, Rat(0));
  Rat floor_y = min_y - unit;  // bottom bus goes one unit below everything

  for (int c : order.colors) {
    auto [lo, hi] = rank_range(spans[c]);
    std::vector<Rat> own_levels, foreign_levels;
    if (eps.epsilon > Rat(0)) {
      for (int i : points_of[c]) own_levels.push_back(inst.points[i].y);
      for (int r = lo; r <= hi; ++r)
        if (inst.points[by_x[r]].color != c)
          foreign_levels.push_back(inst.points[by_x[r]].y);
    }
    Rat y = lowest_feasible_y(processed, lo, hi, floor_y, unit, eps.epsilon,
                              own_levels, foreign_levels);
    // An own connection reaching down past an already placed bus is a
    // crossing that no order-respecting layout avoids.
    for (int i : points_of[c]) {
      const Point& p = inst.points[i];
      if (p.y >= y) continue;
      if (auto hit = buses.query(rank[i]); hit && hit->y >= p.y) {
        res.feasible = false;
        res.witness = {i, hit->color};
        return res;
      }
    }
    res.layout.bus_y[c] = y;
    buses.cover(lo, hi, y, c);
    for (int i : points_of[c]) processed.assign(rank[i], inst.points[i].y);
    floor_y = y + unit;
  }
  res.feasible = true;
  return res;
}

}  // namespace busembed
