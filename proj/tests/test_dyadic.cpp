/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_support.hpp"
#include "roc/dyadic.hpp"
#include "roc/errors.hpp"

using namespace roc;
using roc::testing::rational_of;

TEST_CASE("addition, multiplication, comparison on the spec instances") {
  auto half = DyadicRational::parse("1/2^1");
  auto quarter = DyadicRational::parse("1/2^2");
  CHECK((half + quarter) == DyadicRational::parse("3/2^2"));

  auto a = DyadicRational::parse("3/2^3");   // 3/8
  auto b = DyadicRational::parse("5/2^2");   // 5/4
  CHECK((a * b) == DyadicRational::parse("15/2^5"));

  auto c = DyadicRational::parse("7/2^3");
  CHECK(compare(c, c) == 0);
}

TEST_CASE("canonical form: exponent is minimal and zero is (0,0)") {
  auto d = DyadicRational::parse("6/2^4");
  CHECK(d.mantissa() == 3);
  CHECK(d.exponent() == 3);
  CHECK(d.to_string() == "3/2^3");

  auto two = DyadicRational::from_integer(2);
  CHECK(two.mantissa() == 2);
  CHECK(two.exponent() == 0);

  auto z = DyadicRational::parse("0/2^9");
  CHECK(z.is_zero());
  CHECK(z.exponent() == 0);

  // Canonicalization is idempotent: rebuilding from parts changes nothing.
  DyadicRational again(d.mantissa(), d.exponent());
  CHECK(again == d);
  CHECK(again.to_string() == d.to_string());
}

TEST_CASE("parse/format round trip and error reporting") {
  for (const char* text : {"7/2^3", "-3/2^1", "0/2^0", "2/2^0", "1/2^100"}) {
    auto d = DyadicRational::parse(text);
    CHECK(DyadicRational::parse(d.to_string()) == d);
  }
  CHECK(DyadicRational::parse("-6/2^3").to_string() == "-3/2^2");
  CHECK_THROWS_AS(DyadicRational::parse("7/3^2"), parse_error);
  CHECK_THROWS_AS(DyadicRational::parse("x/2^2"), parse_error);
  CHECK_THROWS_AS(DyadicRational::parse("1/2^2 "), parse_error);
}

TEST_CASE("arithmetic agrees with the big-rational oracle on random pairs") {
  auto gen = roc::testing::rng(0x5eed5eedULL);
  std::uniform_int_distribution<int> exp_dist(0, 120);
  std::uniform_int_distribution<std::int64_t> mant_dist(-1'000'000'000, 1'000'000'000);
  for (int iter = 0; iter < 10'000; ++iter) {
    DyadicRational a(Int(mant_dist(gen)), static_cast<Nat>(exp_dist(gen)));
    DyadicRational b(Int(mant_dist(gen)), static_cast<Nat>(exp_dist(gen)));
    Rat ra = rational_of(a), rb = rational_of(b);
    CHECK(rational_of(a + b) == ra + rb);
    CHECK(rational_of(a - b) == ra - rb);
    CHECK(rational_of(a * b) == ra * rb);
    int cmp = compare(a, b);
    CHECK(cmp == (ra < rb ? -1 : (ra > rb ? 1 : 0)));
  }
}

TEST_CASE("geometric tail closed form") {
  CHECK(geometric_tail(0) == DyadicRational::from_integer(2));
  CHECK(geometric_tail(1) == DyadicRational::from_integer(1));
  CHECK(geometric_tail(5) == DyadicRational::parse("1/2^4"));
  for (Nat n = 0; n <= 64; ++n) {
    CHECK(geometric_tail(n) - geometric_tail(n + 1) == DyadicRational(1, n));
  }
}

TEST_CASE("power_of_two covers both signs") {
  CHECK(DyadicRational::power_of_two(0) == DyadicRational::from_integer(1));
  CHECK(DyadicRational::power_of_two(5) == DyadicRational::from_integer(32));
  CHECK(DyadicRational::power_of_two(-3) == DyadicRational::parse("1/2^3"));
}
