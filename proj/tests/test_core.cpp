#include <catch2/catch_amalgamated.hpp>

#include "busembed/core.hpp"
#include "busembed/dedupe.hpp"
#include "busembed/json_io.hpp"
#include "busembed/random_gen.hpp"

using namespace busembed;

namespace {

ColoredPointSet make(std::initializer_list<std::tuple<double, double, const char*>> pts,
                     double eps = 0) {
  InstanceBuilder b;
  for (auto [x, y, c] : pts) b.add(Rat::from_double(x), Rat::from_double(y), c);
  b.inst.epsilon = Rat::from_double(eps);
  return b.build();
}

}  // namespace

TEST_CASE("spans are the min and max x per color") {
  auto inst = make({{1, 1, "a"}, {5, 2, "a"}});
  auto spans = compute_spans(inst);
  CHECK(spans[0].x_left == Rat(1));
  CHECK(spans[0].x_right == Rat(5));

  auto single = make({{3, 3, "a"}});
  auto s2 = compute_spans(single);
  CHECK(s2[0].x_left == Rat(3));
  CHECK(s2[0].x_right == Rat(3));
}

TEST_CASE("spans match a direct rescan on random instances") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = generate_random(3, 2, seed, 100, 100);
    auto spans = compute_spans(inst);
    for (int c = 0; c < inst.k(); ++c) {
      bool first = true;
      Rat lo, hi;
      for (const auto& p : inst.points) {
        if (p.color != c) continue;
        if (first) { lo = hi = p.x; first = false; }
        else { lo = std::min(lo, p.x); hi = std::max(hi, p.x); }
      }
      CHECK(spans[c].x_left == lo);
      CHECK(spans[c].x_right == hi);
    }
  }
}

TEST_CASE("empty color class is rejected") {
  ColoredPointSet inst;
  inst.color_names = {"a", "ghost"};
  inst.points.push_back({Rat(0), Rat(0), 0});
  CHECK_THROWS_AS(compute_spans(inst), Error);
}

TEST_CASE("conflicting pairs") {
  SECTION("disjoint spans have no conflicts") {
    auto inst = make({{0, 0, "a"}, {1, 1, "a"}, {5, 2, "b"}, {6, 3, "b"}});
    CHECK(conflicting_pairs(inst).pairs.empty());
  }
  SECTION("alternating pattern R B R B") {
    auto inst = make({{0, 0, "R"}, {1, 1, "B"}, {2, 2, "R"}, {3, 3, "B"}});
    auto j = conflicting_pairs(inst).pairs;
    // left blue point inside R's span; right red point inside B's span
    REQUIRE(j.size() == 2);
    CHECK(j[0] == std::pair<int, int>(1, 0));
    CHECK(j[1] == std::pair<int, int>(2, 1));
  }
  SECTION("nested pattern R B B R") {
    auto inst = make({{0, 0, "R"}, {1, 1, "B"}, {2, 2, "B"}, {3, 3, "R"}});
    auto j = conflicting_pairs(inst).pairs;
    REQUIRE(j.size() == 2);
    CHECK(j[0] == std::pair<int, int>(1, 0));
    CHECK(j[1] == std::pair<int, int>(2, 0));
  }
  SECTION("adding a point never removes a conflict") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
      auto inst = generate_random(3, 2, 1000 + trial, 64, 64);
      auto before = conflicting_pairs(inst).pairs;
      ColoredPointSet bigger = inst;
      bigger.points.push_back({Rat((long long)rng.below(200) + 300),
                               Rat((long long)rng.below(200) + 300),
                               (int)rng.below((uint64_t)inst.k())});
      auto after = conflicting_pairs(bigger).pairs;
      for (auto& pr : before)
        CHECK(std::find(after.begin(), after.end(), pr) != after.end());
    }
  }
}

TEST_CASE("validate_planarity") {
  SECTION("two colors, buses at top and bottom") {
    auto inst = make({{0, 1, "a"}, {2, 2, "b"}, {3, 3, "a"}, {5, 4, "b"}});
    BusLayout l{{Rat(10), Rat(0)}};
    CHECK(validate_planarity(inst, l).empty());
  }
  SECTION("connection through a foreign bus is reported") {
    // b's left point sits inside a's span; a's bus between that point and
    // b's bus
    auto inst = make({{0, 0, "a"}, {4, 1, "a"}, {2, 2, "b"}, {6, 3, "b"}});
    BusLayout l{{Rat(5), Rat(8)}};
    auto rep = validate_planarity(inst, l);
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].kind == ViolationKind::connection_crossing);
    CHECK(rep[0].point == 2);
    CHECK(rep[0].color_a == 0);
  }
  SECTION("touching counts as crossing") {
    auto inst = make({{0, 0, "a"}, {4, 1, "a"}, {2, 2, "b"}, {6, 3, "b"}});
    BusLayout touch{{Rat(2), Rat(8)}};  // a's bus exactly at b's point level
    auto rep = validate_planarity(inst, touch);
    REQUIRE_FALSE(rep.empty());
    CHECK(rep[0].kind == ViolationKind::point_on_bus);
  }
  SECTION("equal-height buses with overlapping spans") {
    auto inst = make({{0, 0, "a"}, {4, 1, "a"}, {2, 2, "b"}, {6, 3, "b"}});
    BusLayout l{{Rat(10), Rat(10)}};
    auto rep = validate_planarity(inst, l);
    bool overlap = false;
    for (auto& v : rep) overlap = overlap || v.kind == ViolationKind::bus_overlap;
    CHECK(overlap);
  }
  SECTION("equal-height buses with disjoint spans are fine") {
    auto inst = make({{0, 0, "a"}, {1, 1, "a"}, {5, 2, "b"}, {6, 3, "b"}});
    BusLayout l{{Rat(10), Rat(10)}};
    CHECK(validate_planarity(inst, l).empty());
  }
  SECTION("epsilon distance to own bus") {
    auto inst = make({{0, 0, "a"}, {2, 4, "a"}});
    BusLayout l{{Rat::parse("4.5")}};
    CHECK(validate_planarity(inst, l, EpsilonPolicy(Rat(0))).empty());
    auto rep = validate_planarity(inst, l, EpsilonPolicy(Rat(1)));
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].kind == ViolationKind::epsilon_distance);
  }
  SECTION("missing bus is an error") {
    auto inst = make({{0, 0, "a"}, {1, 1, "b"}});
    BusLayout l{{Rat(1)}};
    CHECK_THROWS_AS(validate_planarity(inst, l), Error);
  }
  SECTION("alternating pattern has no all-above solution on a grid") {
    auto inst = make({{0, 0, "R"}, {1, 1, "B"}, {2, 2, "R"}, {3, 3, "B"}});
    for (int yr = 4; yr <= 12; ++yr)
      for (int yb = 4; yb <= 12; ++yb) {
        if (yr == yb) continue;
        BusLayout l{{Rat(yr), Rat(yb)}};
        CHECK_FALSE(validate_planarity(inst, l).empty());
      }
  }
  SECTION("sweep path agrees with the scan path") {
    for (uint64_t seed = 10; seed < 16; ++seed) {
      auto inst = generate_random(6, 3, seed, 400, 400);
      SplitMix64 rng(seed * 7 + 1);
      BusLayout l;
      for (int c = 0; c < inst.k(); ++c)
        l.bus_y.push_back(Rat((long long)rng.below(400)));
      auto spans = compute_spans(inst);
      std::vector<Violation> scan, sweep;
      busembed::detail::scan_validate(inst, l, spans, scan);
      busembed::detail::sweep_validate(inst, l, spans, sweep);
      CHECK(scan.empty() == sweep.empty());
    }
  }
}

TEST_CASE("ink") {
  auto inst = make({{0, 0, "a"}, {2, 4, "a"}});
  CHECK(ink(inst, BusLayout{{Rat(2)}}) == Rat(4));
  CHECK(ink(inst, BusLayout{{Rat(4)}}) == Rat(4));  // half-bus through top

  SECTION("matches independent summation and is translation invariant") {
    for (uint64_t seed = 3; seed < 8; ++seed) {
      auto inst2 = generate_random(4, 2, seed, 128, 128);
      SplitMix64 rng(seed);
      BusLayout l;
      for (int c = 0; c < inst2.k(); ++c)
        l.bus_y.push_back(Rat((long long)rng.below(128)));
      Rat total(0);
      for (const auto& p : inst2.points) {
        Rat d = l.bus_y[p.color] - p.y;
        total += d < Rat(0) ? -d : d;
      }
      CHECK(ink(inst2, l) == total);

      ColoredPointSet shifted = inst2;
      for (auto& p : shifted.points) p.x += Rat(1000);
      CHECK(ink(shifted, l) == total);

      ColoredPointSet up = inst2;
      for (auto& p : up.points) p.y += Rat(17);
      BusLayout lu = l;
      for (auto& y : lu.bus_y) y += Rat(17);
      CHECK(ink(up, lu) == total);
    }
  }
}

TEST_CASE("bus classification") {
  auto inst = make({{0, 2, "a"}, {4, 6, "a"}});
  CHECK(classify_bus(inst, BusLayout{{Rat(7)}}, 0) == BusType::sqcap);
  CHECK(classify_bus(inst, BusLayout{{Rat(1)}}, 0) == BusType::sqcup);
  CHECK(classify_bus(inst, BusLayout{{Rat(6)}}, 0) == BusType::halfcap);
  CHECK(classify_bus(inst, BusLayout{{Rat(2)}}, 0) == BusType::halfcup);
  CHECK(classify_bus(inst, BusLayout{{Rat(4)}}, 0) == BusType::center);
}

TEST_CASE("dedupe shift") {
  SECTION("one shared x resolves by one grid step") {
    auto inst = make({{2, 0, "a"}, {2, 3, "a"}}, 1.0);
    auto fixed = dedupe_coordinates(inst);
    CHECK(fixed.general_position());
    CHECK(fixed.points[0].x == Rat(2));
    CHECK(fixed.points[1].x == Rat(5, 2));  // eps/2 grid step
  }
  SECTION("general position instances come back unchanged") {
    auto inst = make({{0, 0, "a"}, {1, 2, "a"}, {3, 1, "b"}, {4, 5, "b"}});
    auto fixed = dedupe_coordinates(inst);
    for (int i = 0; i < inst.n(); ++i) {
      CHECK(fixed.points[i].x == inst.points[i].x);
      CHECK(fixed.points[i].y == inst.points[i].y);
    }
  }
  SECTION("order of distinct coordinates is preserved") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      InstanceBuilder b;
      for (int i = 0; i < 10; ++i)
        b.add(Rat((long long)rng.below(6)), Rat((long long)rng.below(6)), "a");
      auto inst = b.build();
      auto fixed = dedupe_coordinates(inst);
      REQUIRE(fixed.general_position());
      for (int i = 0; i < inst.n(); ++i)
        for (int j = 0; j < inst.n(); ++j) {
          if (inst.points[i].x < inst.points[j].x)
            CHECK(fixed.points[i].x < fixed.points[j].x);
          if (inst.points[i].y < inst.points[j].y)
            CHECK(fixed.points[i].y < fixed.points[j].y);
        }
    }
  }
}

TEST_CASE("instance and layout json round trips") {
  auto inst = make({{0, 0.5, "red"}, {2, 4, "red"}, {1, 2, "blue"},
                    {3, 7, "blue"}},
                   0.25);
  auto text = instance_to_json(inst);
  auto back = instance_from_json_text(text);
  REQUIRE(back.n() == inst.n());
  CHECK(back.epsilon == inst.epsilon);
  for (int i = 0; i < inst.n(); ++i) {
    CHECK(back.points[i].x == inst.points[i].x);
    CHECK(back.points[i].y == inst.points[i].y);
    CHECK(back.points[i].color == inst.points[i].color);
  }

  BusLayout l{{Rat(10), Rat(1, 3)}};  // non-decimal value uses the p/q form
  auto ltext = layout_to_json(inst, l);
  auto lback = layout_from_json(parse_exact_json(ltext), inst);
  CHECK(lback.bus_y[0] == Rat(10));
  CHECK(lback.bus_y[1] == Rat(1, 3));
}

TEST_CASE("json parse errors carry the byte position") {
  try {
    parse_exact_json("{\"points\": [,]}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}
