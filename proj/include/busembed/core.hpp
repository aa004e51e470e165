#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "busembed/rational.hpp"

namespace busembed {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Point {
  Rat x;
  Rat y;
  int color = 0;  // index into ColoredPointSet::color_names
};

// Immutable problem instance: colored points in the plane. Colors are
// interned in order of first appearance.
struct ColoredPointSet {
  std::vector<Point> points;
  std::vector<std::string> color_names;
  Rat epsilon = Rat(0);

  int n() const { return (int)points.size(); }
  int k() const { return (int)color_names.size(); }

  // No two points share an x- or a y-coordinate.
  bool general_position() const {
    std::vector<Rat> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& p : points) { xs.push_back(p.x); ys.push_back(p.y); }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    for (size_t i = 1; i < xs.size(); ++i)
      if (xs[i] == xs[i - 1] || ys[i] == ys[i - 1]) return false;
    return true;
  }
};

struct InstanceBuilder {
  ColoredPointSet inst;
  std::map<std::string, int> index;

  int color_id(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    int id = (int)inst.color_names.size();
    inst.color_names.push_back(name);
    index.emplace(name, id);
    return id;
  }
  void add(Rat x, Rat y, const std::string& color) {
    inst.points.push_back({x, y, color_id(color)});
  }
  ColoredPointSet build() { return inst; }
};

// x-extent of one color's bus, fixed by its extreme points.
struct Span {
  int color = -1;
  Rat x_left;
  Rat x_right;
  bool contains(const Rat& x) const { return x_left <= x && x <= x_right; }
  bool overlaps(const Span& o) const {
    return x_left <= o.x_right && o.x_left <= x_right;
  }
};

inline std::vector<Span> compute_spans(const ColoredPointSet& inst) {
  std::vector<Span> spans(inst.k());
  std::vector<bool> seen(inst.k(), false);
  for (const auto& p : inst.points) {
    Span& s = spans[p.color];
    if (!seen[p.color]) {
      seen[p.color] = true;
      s = {p.color, p.x, p.x};
    } else {
      if (p.x < s.x_left) s.x_left = p.x;
      if (p.x > s.x_right) s.x_right = p.x;
    }
  }
  for (int c = 0; c < inst.k(); ++c)
    if (!seen[c])
      throw Error("empty color class: " + inst.color_names[c]);
  return spans;
}

// Set J of (point index, color) with the point of a different color lying
// inside the color's span.
struct ConflictMatrix {
  std::vector<std::pair<int, int>> pairs;
};

inline ConflictMatrix conflicting_pairs(const ColoredPointSet& inst) {
  auto spans = compute_spans(inst);
  ConflictMatrix j;
  for (int i = 0; i < inst.n(); ++i)
    for (int c = 0; c < inst.k(); ++c)
      if (c != inst.points[i].color && spans[c].contains(inst.points[i].x))
        j.pairs.emplace_back(i, c);
  return j;
}

// One y-coordinate per color; the solution object.
struct BusLayout {
  std::vector<Rat> bus_y;  // indexed by color
};

struct EpsilonPolicy {
  Rat epsilon = Rat(0);
  EpsilonPolicy() = default;
  explicit EpsilonPolicy(Rat e) : epsilon(std::move(e)) {
    if (epsilon < Rat(0)) throw std::invalid_argument("epsilon must be >= 0");
  }
};

enum class ViolationKind {
  connection_crossing,  // a foreign connection passes through (or touches) a bus
  point_on_bus,         // a foreign point lies exactly on a bus
  bus_overlap,          // two buses with overlapping spans share a y
  epsilon_distance,     // own point closer than epsilon to its bus
};

struct Violation {
  ViolationKind kind;
  int point = -1;    // offending point, if any
  int color_a = -1;  // the crossed / violated bus
  int color_b = -1;  // second bus for bus_overlap
};

namespace detail {

// Fenwick tree over value ranks, used by the sweep validator.
class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(n + 1, 0) {}
  void add(int i, int v) {
    for (++i; i < (int)tree_.size(); i += i & -i) tree_[i] += v;
  }
  int prefix(int i) const {
    int s = 0;
    for (++i; i > 0; i -= i & -i) s += tree_[i];
    return s;
  }
  int range(int lo, int hi) const {  // inclusive
    if (lo > hi) return 0;
    return prefix(hi) - (lo ? prefix(lo - 1) : 0);
  }

 private:
  std::vector<int> tree_;
};

inline void scan_validate(const ColoredPointSet& inst, const BusLayout& layout,
                          const std::vector<Span>& spans,
                          std::vector<Violation>& out) {
  const int n = inst.n(), k = inst.k();
  for (int i = 0; i < n; ++i) {
    const Point& p = inst.points[i];
    Rat own = layout.bus_y[p.color];
    Rat lo = p.y < own ? p.y : own;
    Rat hi = p.y < own ? own : p.y;
    for (int c = 0; c < k; ++c) {
      if (c == p.color || !spans[c].contains(p.x)) continue;
      const Rat& yc = layout.bus_y[c];
      if (yc == p.y)
        out.push_back({ViolationKind::point_on_bus, i, c, -1});
      else if (lo <= yc && yc <= hi)
        out.push_back({ViolationKind::connection_crossing, i, c, -1});
    }
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (layout.bus_y[a] == layout.bus_y[b] && spans[a].overlaps(spans[b]))
        out.push_back({ViolationKind::bus_overlap, -1, a, b});
}

// O((n + k) log) sweep for large instances; reports are capped since the
// acceptance checks only need emptiness.
inline void sweep_validate(const ColoredPointSet& inst, const BusLayout& layout,
                           const std::vector<Span>& spans,
                           std::vector<Violation>& out) {
  const int n = inst.n(), k = inst.k();
  const size_t cap = 64;

  std::vector<Rat> ys(layout.bus_y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto rank = [&](const Rat& v) {
    return (int)(std::lower_bound(ys.begin(), ys.end(), v) - ys.begin());
  };

  struct Event {
    Rat x;
    int type;  // 0 = span open, 1 = point, 2 = span close
    int id;
  };
  std::vector<Event> ev;
  ev.reserve(n + 2 * k);
  for (int c = 0; c < k; ++c) {
    ev.push_back({spans[c].x_left, 0, c});
    ev.push_back({spans[c].x_right, 2, c});
  }
  for (int i = 0; i < n; ++i) ev.push_back({inst.points[i].x, 1, i});
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.type < b.type;  // open spans before points before closes
  });

  Fenwick active((int)ys.size());
  std::vector<std::vector<int>> at_rank(ys.size());  // active buses per y rank
  for (const Event& e : ev) {
    if (e.type == 0) {
      int r = rank(layout.bus_y[e.id]);
      for (int c : at_rank[r])
        if (spans[c].overlaps(spans[e.id]) && out.size() < cap)
          out.push_back({ViolationKind::bus_overlap, -1, c, e.id});
      at_rank[r].push_back(e.id);
      active.add(r, 1);
    } else if (e.type == 2) {
      int r = rank(layout.bus_y[e.id]);
      auto& v = at_rank[r];
      v.erase(std::find(v.begin(), v.end(), e.id));
      active.add(r, -1);
    } else {
      const Point& p = inst.points[e.id];
      Rat own = layout.bus_y[p.color];
      Rat lo = p.y < own ? p.y : own;
      Rat hi = p.y < own ? own : p.y;
      int rlo = rank(lo);
      int rhi = (int)(std::upper_bound(ys.begin(), ys.end(), hi) -
                      ys.begin()) - 1;
      int cnt = active.range(rlo, rhi);
      cnt -= 1;  // own bus is active here and its y lies in [lo, hi]
      if (cnt > 0 && out.size() < cap) {
        for (int r = rlo; r <= rhi && out.size() < cap; ++r)
          for (int c : at_rank[r]) {
            if (c == p.color || !spans[c].contains(p.x)) continue;
            if (layout.bus_y[c] == p.y)
              out.push_back({ViolationKind::point_on_bus, e.id, c, -1});
            else
              out.push_back({ViolationKind::connection_crossing, e.id, c, -1});
          }
      }
    }
  }
}

}  // namespace detail

// Reports every crossing/overlap/espilon violation of the layout, empty
// report meaning the layout is a planar bus realization. Touching counts as
// crossing throughout.
inline std::vector<Violation> validate_planarity(
    const ColoredPointSet& inst, const BusLayout& layout,
    const EpsilonPolicy& eps = EpsilonPolicy()) {
  if ((int)layout.bus_y.size() != inst.k())
    throw Error("layout does not cover every color");
  auto spans = compute_spans(inst);
  std::vector<Violation> out;

  if ((long long)inst.n() * inst.k() <= 2'000'000)
    detail::scan_validate(inst, layout, spans, out);
  else
    detail::sweep_validate(inst, layout, spans, out);

  if (eps.epsilon > Rat(0)) {
    for (int i = 0; i < inst.n(); ++i) {
      const Point& p = inst.points[i];
      if ((layout.bus_y[p.color] - p.y).abs() < eps.epsilon)
        out.push_back({ViolationKind::epsilon_distance, i, p.color, -1});
    }
  }
  return out;
}

// Total connection length sum |y(c) - y(p)|; bus lengths are fixed by the
// input and not counted.
inline Rat ink(const ColoredPointSet& inst, const BusLayout& layout) {
  if ((int)layout.bus_y.size() != inst.k())
    throw Error("layout does not cover every color");
  Rat total(0);
  for (const auto& p : inst.points) total += (layout.bus_y[p.color] - p.y).abs();
  return total;
}

// Sorted distinct point y-values; shared by the solvers' discrete level
// schemes.
inline std::vector<Rat> sorted_point_levels(const ColoredPointSet& inst) {
  std::vector<Rat> ys;
  ys.reserve(inst.points.size());
  for (const auto& p : inst.points) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

// 1/n of the smallest gap between consecutive distinct point y-values; the
// discrete placement unit of the bottommost-placement scheme.
inline Rat placement_unit(const ColoredPointSet& inst) {
  auto ys = sorted_point_levels(inst);
  if (ys.size() < 2) return Rat(1);
  Rat min_gap = ys[1] - ys[0];
  for (size_t i = 2; i < ys.size(); ++i)
    min_gap = std::min(min_gap, ys[i] - ys[i - 1]);
  return min_gap / Rat(std::max(1, inst.n()));
}

enum class BusType { sqcap, sqcup, halfcap, halfcup, center };

// Recomputable classification of a placed bus from layout + points.
inline BusType classify_bus(const ColoredPointSet& inst,
                            const BusLayout& layout, int color) {
  Rat y = layout.bus_y[color];
  bool any = false;
  Rat top, bottom;
  for (const auto& p : inst.points) {
    if (p.color != color) continue;
    if (!any) { top = bottom = p.y; any = true; }
    else { top = std::max(top, p.y); bottom = std::min(bottom, p.y); }
  }
  if (!any) throw Error("classify_bus: empty color");
  if (y > top) return BusType::sqcap;
  if (y < bottom) return BusType::sqcup;
  if (y == top) return BusType::halfcap;
  if (y == bottom) return BusType::halfcup;
  return BusType::center;
}

}  // namespace busembed
