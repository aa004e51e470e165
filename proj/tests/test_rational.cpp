#include <catch2/catch_amalgamated.hpp>

#include "busembed/rational.hpp"

using busembed::Rat;

TEST_CASE("construction and normalization") {
  CHECK(Rat(6, 4) == Rat(3, 2));
  CHECK(Rat(-6, 4) == Rat(3, -2));
  CHECK(Rat(0, 5) == Rat(0));
  CHECK(Rat(7).is_integer());
  CHECK_FALSE(Rat(7, 2).is_integer());
  CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic and ordering") {
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 2) - Rat(2, 3) == Rat(-1, 6));
  CHECK(Rat(3, 4) * Rat(2, 9) == Rat(1, 6));
  CHECK(Rat(3, 4) / Rat(3, 2) == Rat(1, 2));
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-5, 2) < Rat(-2));
  CHECK((Rat(7, 3) - Rat(7, 3)).abs() == Rat(0));
  CHECK(Rat(-3, 7).abs() == Rat(3, 7));
}

TEST_CASE("decimal parsing is exact") {
  CHECK(Rat::parse("0.1") == Rat(1, 10));
  CHECK(Rat::parse("-3.25") == Rat(-13, 4));
  CHECK(Rat::parse("1e-3") == Rat(1, 1000));
  CHECK(Rat::parse("2.5e2") == Rat(250));
  CHECK(Rat::parse("7/2") == Rat(7, 2));
  CHECK_THROWS(Rat::parse("abc"));
  CHECK_THROWS(Rat::parse(""));
}

TEST_CASE("doubles convert through their shortest decimal") {
  CHECK(Rat::from_double(0.1) == Rat(1, 10));
  CHECK(Rat::from_double(-2.5) == Rat(-5, 2));
  CHECK(Rat::from_double(1024) == Rat(1024));
}

TEST_CASE("shortest exact decimal formatting") {
  CHECK(Rat(1, 10).str() == "0.1");
  CHECK(Rat(-13, 4).str() == "-3.25");
  CHECK(Rat(5).str() == "5");
  CHECK(Rat(1, 3).str() == "1/3");
  CHECK(Rat(1, 10).decimal_exact());
  CHECK_FALSE(Rat(1, 3).decimal_exact());
  // round trip through the printed form
  for (long long n = -12; n <= 12; ++n)
    for (long long d = 1; d <= 10; ++d)
      CHECK(Rat::parse(Rat(n, d).str()) == Rat(n, d));
}

TEST_CASE("overflow is detected, not wrapped") {
  Rat big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}
