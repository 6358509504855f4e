/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_support.hpp"
#include "roc/analysis.hpp"
#include "roc/combinators.hpp"
#include "roc/errors.hpp"
#include "roc/profile.hpp"

using namespace roc;

namespace {

// Exact sorted-series tail for the product of two copies of f(k)=k+1: the
// sorted product name takes each value v >= 2 exactly v-1 times, so entries
// with value v occupy indices [C(v-1), C(v)) with C(v) = v(v-1)/2.
DyadicRational product_sorted_tail(Nat m) {
  Nat v = 2;
  while (v * (v - 1) / 2 <= m) ++v;
  // Partial block of value v, then the closed-form remainder.
  DyadicRational tail = DyadicRational(Int(v * (v - 1) / 2 - m), 0) * DyadicRational(1, v);
  tail += poly_geom_tail(DyadicRational(), DyadicRational::from_integer(1),
                         -DyadicRational::from_integer(1), v + 1);
  return tail;
}

}  // namespace

TEST_CASE("sum_name interleaves and derives witnesses") {
  auto h = sum_name(linear_name(2), linear_name(2));
  h.ensure(6);
  CHECK(h.realized() == std::vector<Nat>{2, 2, 3, 3, 4, 4});

  auto f = Name::from_values({7, 1, 5});
  auto g = Name::from_values({0, 9});
  auto mixed = sum_name(f, g);
  CHECK(mixed.at(0) == f.at(0));
  CHECK(mixed.at(1) == g.at(0));
  CHECK(mixed.at(2) == f.at(1));
  CHECK(mixed.at(3) == g.at(1));

  auto wf = linear_name(1);
  auto wg = linear_name(3);
  auto wh = sum_name(wf, wg);
  REQUIRE(wh.escape().has_value());
  for (Nat n = 0; n <= 10; ++n)
    CHECK(wh.escape()->at(n) ==
          2 * std::max(wf.escape()->at(n), wg.escape()->at(n)) + 1);

  SUBCASE("u-profile adds pointwise on complete windows") {
    auto gen = roc::testing::rng(42);
    std::uniform_int_distribution<Nat> mult(0, 3);
    for (int iter = 0; iter < 50; ++iter) {
      std::vector<Int> uf, ug;
      for (Nat n = 0; n <= 8; ++n) {
        uf.push_back(Int(mult(gen)));
        ug.push_back(Int(mult(gen)));
      }
      auto a = multiplicity_name([uf](Nat n) -> Int { return n < uf.size() ? uf[n] : 1; }, "a");
      auto b = multiplicity_name([ug](Nat n) -> Int { return n < ug.size() ? ug[n] : 1; }, "b");
      auto s = sum_name(a, b);
      std::size_t need = s.escape()->at(8);
      auto profile = u_profile(s, 8, need);
      REQUIRE(profile.complete_upto() == Nat(8));
      for (Nat n = 0; n <= 8; ++n)
        CHECK(Int(profile.count(n)) == uf[n] + ug[n]);
    }
  }

  SUBCASE("partial sums split exactly for every n up to 10^4") {
    auto a = linear_name(1);
    auto b = linear_name(2);
    auto s = sum_name(a, b);
    s.ensure(20'000);
    DyadicRational sum_h, sum_a, sum_b;
    bool all_equal = true;
    for (std::size_t n = 0; n <= 10'000; ++n) {
      if (sum_h != sum_a + sum_b) all_equal = false;
      if (n == 10'000) break;
      sum_a += DyadicRational(1, a.at(n));
      sum_b += DyadicRational(1, b.at(n));
      sum_h += DyadicRational(1, s.at(2 * n));
      sum_h += DyadicRational(1, s.at(2 * n + 1));
    }
    CHECK(all_equal);
    // Spot-check against the library partial sums.
    CHECK(partial_sum(s, 2 * 777) == partial_sum(a, 777) + partial_sum(b, 777));
  }
}

TEST_CASE("sum_modulus") {
  ModulusCertificate r{[](Nat n) -> Int { return Int(n) + 1; }, SeriesTarget::u_series, "r",
                       false};
  ModulusCertificate s{[](Nat n) -> Int { return Int(n) + 2; }, SeriesTarget::u_series, "s",
                       false};
  auto t = sum_modulus(r, s);
  for (Nat n = 0; n <= 10; ++n) CHECK(t.at(n) == Int(n) + 3);
  auto t2 = sum_modulus(r, r);
  for (Nat n = 0; n <= 10; ++n) CHECK(t2.at(n) == r.at(n + 1));

  // Validation on f = g = (k -> k+2): u_h(n) = 2 for n >= 2, tail from
  // m >= 2 is 2^{-m+2}.
  auto tail = [](const Int& index) -> DyadicRational {
    Nat m = index.convert_to<Nat>();
    if (m < 2) m = 2;
    return DyadicRational(1, m - 2);
  };
  CHECK(validate_certificate(t2, tail, 0, 16).ok);
}

TEST_CASE("product_name enumerates diagonals") {
  auto h = product_name(linear_name(1), linear_name(1));
  h.ensure(6);
  CHECK(h.realized() == std::vector<Nat>{2, 3, 3, 4, 4, 4});

  auto c = Name::from_values({5, 5, 5});
  auto d = Name::from_values({7, 9});
  CHECK(product_name(c, d).at(0) == c.at(0) + d.at(0));

  SUBCASE("u-profile is the convolution of the factors'") {
    auto gen = roc::testing::rng(7);
    std::uniform_int_distribution<Nat> mult(0, 2);
    for (int iter = 0; iter < 25; ++iter) {
      std::vector<Int> uf{0}, ug{0};  // keep value 0 out so series stay small
      for (Nat n = 1; n <= 6; ++n) {
        uf.push_back(Int(mult(gen)));
        ug.push_back(Int(mult(gen)));
      }
      auto a = multiplicity_name([uf](Nat n) -> Int { return n < uf.size() ? uf[n] : 1; }, "a");
      auto b = multiplicity_name([ug](Nat n) -> Int { return n < ug.size() ? ug[n] : 1; }, "b");
      auto p = product_name(a, b);
      std::size_t need = p.escape()->at(6);
      auto profile = u_profile(p, 6, need);
      REQUIRE(profile.complete_upto() == Nat(6));
      for (Nat n = 0; n <= 6; ++n) {
        Int expect = 0;
        for (Nat k = 0; k <= n; ++k) expect += uf[k] * ug[n - k];
        CHECK(Int(profile.count(n)) == expect);
      }
    }
  }

  SUBCASE("escape bound: no value <= n appears at or past E_h(n)") {
    auto p = product_name(linear_name(1), linear_name(2));
    p.ensure(400);
    for (Nat n = 0; n <= 12; ++n) {
      Nat e = p.escape()->at(n);
      for (std::size_t k = e; k < 400; ++k) CHECK(p.at(k) > n);
    }
  }

  SUBCASE("full-diagonal partial sums against the factor partials") {
    auto f = linear_name(1);
    auto g = linear_name(2);
    auto p = product_name(f, g);
    for (Nat L : {0u, 1u, 5u, 20u}) {
      std::size_t cells = (L + 1) * (L + 2) / 2;
      DyadicRational diag_sum = partial_sum(p, cells);
      // Cross tail: pairs (a, b) with a, b <= L and a + b > L.
      DyadicRational cross;
      for (Nat a = 0; a <= L; ++a)
        for (Nat b = 0; b <= L; ++b)
          if (a + b > L) cross += DyadicRational(1, f.at(a) + g.at(b));
      CHECK(diag_sum + cross == partial_sum(f, L + 1) * partial_sum(g, L + 1));
    }
  }
}

TEST_CASE("product_modulus") {
  ModulusCertificate r{[](Nat n) -> Int { return Int(n) + 1; }, SeriesTarget::sorted, "r",
                       false};
  auto t = product_modulus(r, r, 0);
  for (Nat n = 0; n <= 12; ++n) CHECK(t.at(n) == 2 * (Int(n) + 3));
  CHECK(t.at(0) == 2 * std::max(r.at(2), r.at(2)));
  CHECK(t.target == SeriesTarget::diagonal);

  // Validation for f = g = (k -> k+1), c = 0 (both denote 1 <= 2^0).  The
  // diagonal-l sum is (l+1) 2^{-(l+2)}, so the diagonal tail is exact.
  auto diag_tail = [](const Int& index) -> DyadicRational {
    Nat l = index.convert_to<Nat>();
    DyadicRational quarter(1, 2);
    return poly_geom_tail(DyadicRational(), DyadicRational::from_integer(1),
                          DyadicRational::from_integer(1), l) *
           quarter;
  };
  CHECK(validate_certificate(t, diag_tail, 0, 12).ok);

  // The flattened certificate bounds the sorted flat series.
  auto ts = product_modulus_sorted(r, r, 0);
  CHECK(ts.target == SeriesTarget::sorted);
  auto flat_tail = [](const Int& index) -> DyadicRational {
    return product_sorted_tail(index.convert_to<Nat>());
  };
  CHECK(validate_certificate(ts, flat_tail, 0, 12).ok);

  ModulusCertificate wrong{[](Nat n) -> Int { return Int(n); }, SeriesTarget::u_series, "w",
                           false};
  CHECK_THROWS_AS(product_modulus(wrong, wrong, 0), invalid_parameter);
}
