#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "busembed/core.hpp"

namespace busembed {

// Resolves shared coordinates by shifting, per axis, every point from the
// first collision onward one grid step further. Processing each axis in its
// own sorted order keeps the relative order of distinct values and the
// span/conflict structure intact. Instances already in general position come
// back unchanged.
inline ColoredPointSet dedupe_coordinates(const ColoredPointSet& inst) {
  if (inst.general_position()) return inst;
  Rat step = inst.epsilon > Rat(0) ? inst.epsilon / Rat(2) : Rat(1, 2);
  ColoredPointSet out = inst;
  const int n = out.n();

  auto shift_axis = [&](auto get, auto set) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (get(out.points[a]) != get(out.points[b]))
        return get(out.points[a]) < get(out.points[b]);
      return a < b;
    });
    Rat acc(0);
    bool have_prev = false;
    Rat prev;
    for (int i : idx) {
      Rat cur = get(out.points[i]) + acc;
      if (have_prev && cur == prev) {
        acc += step;
        cur += step;
      }
      set(out.points[i], cur);
      prev = cur;
      have_prev = true;
    }
  };

  shift_axis([](const Point& p) { return p.x; },
             [](Point& p, const Rat& v) { p.x = v; });
  shift_axis([](const Point& p) { return p.y; },
             [](Point& p, const Rat& v) { p.y = v; });
  return out;
}

}  // namespace busembed
