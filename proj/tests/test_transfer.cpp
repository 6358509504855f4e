/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_support.hpp"
#include "roc/errors.hpp"
#include "roc/transfer.hpp"

using namespace roc;

TEST_CASE("greedy_dyadic_increment") {
  auto seven_eighths = DyadicRational::parse("7/2^3");
  CHECK(greedy_dyadic_increment(DyadicRational(), seven_eighths, 3) ==
        std::vector<Nat>{1, 2, 3});
  CHECK(greedy_dyadic_increment(DyadicRational(), seven_eighths, 1) ==
        std::vector<Nat>{1});
  CHECK(greedy_dyadic_increment(seven_eighths, seven_eighths, 5).empty());
  CHECK_THROWS_AS(greedy_dyadic_increment(seven_eighths, DyadicRational(), 1),
                  invalid_parameter);

  SUBCASE("landing interval property on random pairs") {
    auto gen = roc::testing::rng(99);
    std::uniform_int_distribution<int> mant(0, 4000);
    std::uniform_int_distribution<int> slack(0, 12);
    for (int iter = 0; iter < 500; ++iter) {
      DyadicRational target(Int(mant(gen)), 8);
      Nat sl = static_cast<Nat>(slack(gen));
      auto emitted = greedy_dyadic_increment(DyadicRational(), target, sl);
      DyadicRational landed;
      Nat prev_e = 0;
      bool strictly_increasing = true;
      for (std::size_t i = 0; i < emitted.size(); ++i) {
        landed += DyadicRational(1, emitted[i]);
        if (i > 0 && emitted[i] <= prev_e && emitted[i] != 0) strictly_increasing = false;
        prev_e = emitted[i];
      }
      CHECK(landed <= target);
      CHECK(target - landed < DyadicRational(1, sl));
      // Exponents increase strictly once below 1 (value 0 may repeat for the
      // integer part).
      CHECK(strictly_increasing);
    }
  }
}

TEST_CASE("third_truncations") {
  auto x = third_truncations();
  CHECK(x.at(0).is_zero());
  CHECK(x.at(1) == DyadicRational::parse("1/2^2"));
  CHECK(x.at(2) == DyadicRational::parse("5/2^4"));
  CHECK(x.at(3) == DyadicRational::parse("21/2^6"));
  // Increments are single even-position bits: x_{n+1} - x_n = 2^-(2n+2).
  for (Nat n = 0; n < 12; ++n) CHECK(x.at(n + 1) - x.at(n) == DyadicRational(1, 2 * n + 2));
}

TEST_CASE("solovay_transfer on the 1/3 approximation") {
  // Binary-expansion oracle: 1/3 = sum over j >= 1 of 2^-(2j), so the name
  // must walk down the even exponents.
  auto result = solovay_transfer(third_truncations(), affine_name(2, 2), 0, 12);
  REQUIRE(result.report.hypothesis_ok);
  CHECK(result.report.all_landed);
  result.name.ensure(4);
  CHECK(result.name.realized()[0] == 2);
  CHECK(result.name.realized()[1] == 4);
  CHECK(result.name.realized()[2] == 6);
  CHECK(result.name.realized()[3] == 8);
  CHECK(result.report.profile_bound_ok);
  CHECK_FALSE(result.report.profile_checked_levels.empty());

  SUBCASE("every stage lands in its interval") {
    for (const auto& stage : result.report.stages) CHECK(stage.in_interval);
  }

  SUBCASE("emitted jumps add up to the consumed approximation within slack") {
    auto x = third_truncations();
    DyadicRational total = partial_sum(result.name, result.name.available());
    DyadicRational consumed = x.at(12) - x.at(0);
    CHECK(total <= consumed);
    CHECK(consumed - total < DyadicRational(1, 12));
  }
}

TEST_CASE("solovay_transfer halts on a hypothesis violation") {
  // x jumps by 1/2 at step 3 while g promises increments <= 2^-(t+2).
  RationalApproximation bad{
      [](Nat n) -> DyadicRational {
        DyadicRational base = third_truncations().at(n);
        if (n >= 4) base += DyadicRational(1, 1);
        return base;
      },
      "bad"};
  auto result = solovay_transfer(bad, affine_name(2, 2), 0, 10);
  CHECK_FALSE(result.report.hypothesis_ok);
  REQUIRE(result.report.violated_step.has_value());
  CHECK(*result.report.violated_step == 3);
  // Partial name from the completed stages is still returned.
  CHECK(result.report.stages.size() == 3);
}

TEST_CASE("solovay_transfer with a constant approximation emits once, then idles") {
  RationalApproximation constant{
      [](Nat n) -> DyadicRational {
        return n == 0 ? DyadicRational() : DyadicRational::parse("3/2^2");
      },
      "constant"};
  auto result = solovay_transfer(constant, affine_name(1, 0), 2, 10);
  REQUIRE(result.report.hypothesis_ok);
  CHECK(result.report.all_landed);
  // Stage 0 emits 1/2, stage 1 tightens onto 3/4 exactly; from then on the
  // increments are zero and the slack-only refinement emits nothing.
  CHECK(result.report.stages[0].emitted == std::vector<Nat>{1});
  CHECK(result.report.stages[1].emitted == std::vector<Nat>{2});
  CHECK(result.report.stages[1].landed == DyadicRational::parse("3/2^2"));
  std::size_t after = 0;
  for (std::size_t t = 2; t < result.report.stages.size(); ++t)
    after += result.report.stages[t].emitted.size();
  CHECK(after == 0);
}

TEST_CASE("set_to_reordered_name on the evens: hand-simulated trace") {
  // Hand simulation with h(n) = 2n+2, A_n = first n evens:
  //   s(1) = 2, B_1 = {0},    jump 2 twice   (1/2   = 2 * 2^-2)
  //   s(2) = 3, B_2 = {0,2},  jump 4 twice   (1/8   = 2 * 2^-4)
  //   s(3) = 4, B_3 = {0,2,4} jump 6 twice   (1/32  = 2 * 2^-6)
  auto result = set_to_reordered_name(evens_set(), [](Nat n) { return 2 * n + 2; }, "2n+2", 64);
  REQUIRE(result.stages.size() >= 3);
  CHECK(result.all_balanced);
  CHECK(result.jump_bound_ok);
  CHECK(result.stages[0].schedule_index == 2);
  CHECK(result.stages[0].multiplicities == std::vector<Nat>{2});
  CHECK(result.stages[1].schedule_index == 3);
  CHECK(result.stages[1].multiplicities == std::vector<Nat>{0, 2});
  CHECK(result.stages[2].schedule_index == 4);
  CHECK(result.stages[2].multiplicities == std::vector<Nat>{0, 0, 2});
  result.name.ensure(6);
  CHECK(result.name.realized()[0] == 2);
  CHECK(result.name.realized()[1] == 2);
  CHECK(result.name.realized()[2] == 4);
  CHECK(result.name.realized()[3] == 4);
  CHECK(result.name.realized()[4] == 6);
  CHECK(result.name.realized()[5] == 6);

  SUBCASE("values lie in the range of h and balances telescope") {
    for (Nat v : result.name.realized()) CHECK(v % 2 == 0);
    DyadicRational total;
    for (const auto& stage : result.stages) {
      DyadicRational paid;
      for (std::size_t k = 0; k < stage.multiplicities.size(); ++k)
        paid += DyadicRational(Int(stage.multiplicities[k]), 0) * DyadicRational(1, 2 * k + 2);
      CHECK(stage.set_value_before + paid == stage.set_value_after);
      total += paid;
    }
    CHECK(total == partial_sum(result.name, result.name.available()));
  }

  SUBCASE("the u-series modulus g(n) = h(n+1) validates on the trace") {
    // Exact finite-trace tail: all of u_f is known on the realized window.
    std::vector<Nat> values = result.name.realized();
    auto tail = [&values](const Int& index) -> DyadicRational {
      DyadicRational t;
      std::map<Nat, Nat> u;
      for (Nat v : values) ++u[v];
      for (const auto& [v, count] : u)
        if (Int(v) >= index) t += DyadicRational(Int(count), 0) * DyadicRational(1, v);
      return t;
    };
    CHECK(validate_certificate(result.u_modulus, tail, 0, 16).ok);
  }
}

TEST_CASE("set_to_reordered_name with a frozen set stalls after zero increments") {
  // A set that never grows: stage 0 pays the revealed mass below h(0), then
  // the schedule cannot place h(1) and the construction returns its partial
  // trace with nothing further emitted.
  auto frozen = cumulative_set({{0, 2}}, "frozen");
  auto result = set_to_reordered_name(frozen, [](Nat n) { return 2 * n + 2; }, "2n+2", 32);
  CHECK(result.stalled);
  REQUIRE(result.stages.size() == 1);
  CHECK(result.name.realized() == std::vector<Nat>{2, 2});

  // h(0) never contained: genuine stall.
  CHECK_THROWS_AS(
      set_to_reordered_name(cumulative_set({{1}}, "odd"), [](Nat n) { return 2 * n + 2; },
                            "2n+2", 16),
      schedule_stall);
}

TEST_CASE("nearly_computable_upgrade") {
  ModulusCertificate r1{[](Nat n) -> Int { return Int(n) + 1; }, SeriesTarget::u_series, "r",
                        false};
  auto t = nearly_computable_upgrade(r1, [](const Int& n) { return 2 * n; }, "s(n)=2n");
  for (Nat n = 0; n <= 10; ++n) CHECK(t.at(n) == 2 * (Int(n) + 1));
  CHECK(t.target == SeriesTarget::raw);

  ModulusCertificate rid{[](Nat n) -> Int { return Int(n); }, SeriesTarget::u_series, "id",
                         false};
  auto tid = nearly_computable_upgrade(rid, [](const Int& n) { return n; }, "id");
  for (Nat n = 0; n <= 10; ++n) CHECK(tid.at(n) == Int(n));

  // Validation on the computable case f(k) = k: u-modulus r(n) = n+1 and the
  // escape witness s(n) = n give a raw-series modulus t(n) = n+1, whose tail
  // is exactly 2^-n.
  auto upgraded = nearly_computable_upgrade(r1, [](const Int& n) { return n; }, "identity");
  auto tail = [](const Int& index) -> DyadicRational {
    return geometric_tail(index.convert_to<Nat>());
  };
  CHECK(validate_certificate(upgraded, tail, 0, 20).ok);
}

TEST_CASE("split_name") {
  SUBCASE("finite name, sparse r: multisets partition") {
    auto f = Name::from_values({1, 1, 2});
    auto result = split_name(f, [](Nat m) { return 100 + m; }, "sparse", 3);
    std::vector<Nat> merged;
    for (Nat v : result.g.realized()) merged.push_back(v);
    for (Nat v : result.h.realized()) merged.push_back(v);
    std::sort(merged.begin(), merged.end());
    CHECK(merged == std::vector<Nat>{1, 1, 2});
    CHECK(result.report.conserved);
    CHECK(result.report.staggered_ok);
    CHECK(result.report.regaining_ok);
  }

  SUBCASE("identity name splits with unit multiplicities") {
    auto f = linear_name(0);
    auto result = split_name(f, [](Nat m) { return m; }, "identity", 64);
    CHECK(result.report.conserved);
    CHECK(result.report.staggered_ok);
    CHECK(result.report.regaining_ok);
    REQUIRE(result.report.checked_upto.has_value());
    // u_g(n) + u_h(n) = 1 on every complete level.
    for (Nat n = 0; n <= *result.report.checked_upto; ++n) {
      Nat total = 0;
      for (Nat v : result.g.realized())
        if (v == n) ++total;
      for (Nat v : result.h.realized())
        if (v == n) ++total;
      CHECK(total == 1);
    }
    // Both sides receive an infinite share (balanced routing).
    CHECK(result.g.available() >= 16);
    CHECK(result.h.available() >= 16);
  }

  SUBCASE("staggered bounds hold under exhaustive scan") {
    auto f = linear_name(0);
    auto result = split_name(f, [](Nat m) { return 2 * m + 1; }, "odd-marks", 64);
    const auto& g = result.g.realized();
    for (Nat n = 0; 2 * (2 * n) + 1 <= g.size(); ++n) {
      Nat mark = 2 * (2 * n) + 1;
      for (std::size_t k = mark; k < g.size(); ++k) CHECK(g[k] >= mark);
    }
    CHECK(result.report.staggered_ok);
  }

  SUBCASE("infeasible r raises split_infeasible") {
    // Every value is 0 forever except a late small value; dense marks on
    // both sides outgrow the values.
    auto f = Name::from_values({0, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(split_name(f, [](Nat m) { return m + 1; }, "dense", 8), split_infeasible);
  }

  SUBCASE("witness requirement") {
    auto no_witness = Name::from_generator([]() -> std::optional<Nat> { return 5; });
    no_witness.try_ensure(4);
    CHECK_THROWS_AS(split_name(no_witness, [](Nat m) { return m; }, "r", 4),
                    invalid_parameter);
  }
}
