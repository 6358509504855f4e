/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracle_support.hpp"
#include "roc/diagonal.hpp"
#include "roc/errors.hpp"

using namespace roc;

TEST_CASE("Cantor pairing") {
  CHECK(pair_index(0, 0) == 0);
  CHECK(pair_index(1, 0) == 1);
  CHECK(pair_index(0, 1) == 2);
  for (Nat i = 0; i <= 50; ++i)
    for (Nat j = 0; j <= 50; ++j) {
      auto [a, b] = unpair_index(pair_index(i, j));
      CHECK(a == i);
      CHECK(b == j);
    }
}

TEST_CASE("schedule: defining tail inequality against the exact oracle") {
  auto setup = make_diag_setup(RhoSpec::one());
  Schedule sched(setup.r_hat, setup.r_hat_cert);

  // r(k) = k gives r_hat(m) = m(m+1)/2, whose weighted tail has the exact
  // closed form sum_{k>=m} (k^2/2 + k/2) 2^-k.
  DyadicRational half(1, 1);
  auto exact_tail = [&](Nat m) {
    return poly_geom_tail(half, half, DyadicRational(), m);
  };

  CHECK(sched.at(0) == 1);  // first index with positive r_hat
  Nat prev = sched.at(0);
  for (Nat n = 0; n <= 8; ++n) {
    Nat next = sched.at(n + 1);
    CHECK(next > prev);  // strictly increasing
    // tail(s(n+1)) <= (1/2) * 2^-s(n), exactly.
    CHECK(exact_tail(next) <= DyadicRational(1, prev + 1));
    prev = next;
  }

  // The certified upper bound is sound against the exact tail.
  for (Nat m : {2u, 5u, 9u, 17u}) {
    CHECK(exact_tail(m) <= sched.tail_upper_bound(m, m + 3));
  }
}

TEST_CASE("zero opponents: first stage fires on the empty sum") {
  auto result = run_diagonalization({}, RhoSpec::one(), 200);
  const auto& rec0 = result.trace.records[0];
  CHECK(rec0.i == 0);
  CHECK(rec0.j == 0);
  CHECK(rec0.attention);
  CHECK(rec0.x_before.is_zero());
  REQUIRE(rec0.jump.has_value());
  // x_1 = 2^-s(<0,0>) with s(0) = 1.
  CHECK(*rec0.jump == 1);
  CHECK(result.trace.records[1].x_before == DyadicRational(1, 1));

  SUBCASE("every requirement fires at most finitely often once x leaves its band") {
    std::map<Nat, Nat> fires;
    for (const auto& rec : result.trace.records)
      if (rec.attention) ++fires[rec.i];
    // With all-divergent opponents only the very first stage can fire: after
    // x > 1/8 * 2^-s(<i,w>) <= 1/16 no band around zero contains x.
    CHECK(fires.size() == 1);
    CHECK(fires[0] == 1);
  }

  SUBCASE("check_trace finds nothing to complain about") {
    auto report = check_trace(result.trace, {}, RhoSpec::one());
    CHECK(report.ok());
    CHECK(report.attention_counts.at(0) == 1);
  }
}

TEST_CASE("builtin suite run: invariants and trace verification") {
  auto suite = builtin_suite();
  auto result = run_diagonalization(suite, RhoSpec::one(), 600);
  auto setup = make_diag_setup(RhoSpec::one());

  SUBCASE("jump budget: u_f(n) <= r_hat(n) for every exponent") {
    std::map<Nat, Nat> counts;
    for (const auto& rec : result.trace.records)
      if (rec.jump) ++counts[*rec.jump];
    CHECK_FALSE(counts.empty());
    for (const auto& [e, count] : counts) CHECK(Int(count) <= setup.r_hat(e));
  }

  SUBCASE("name extraction reproduces the jump telescoping") {
    Name f = extract_name(result.trace);
    // partial_sum(f, N) equals x at the stage of the N-th jump.
    Nat seen = 0;
    for (const auto& rec : result.trace.records) {
      if (!rec.jump) continue;
      CHECK(partial_sum(f, seen) == rec.x_before);
      ++seen;
    }
    CHECK(partial_sum(f, seen) == result.trace.x_final);
  }

  SUBCASE("x is non-decreasing and bounded by the weighted budget") {
    DyadicRational prev;
    for (const auto& rec : result.trace.records) {
      CHECK(rec.x_before >= prev);
      prev = rec.x_before;
    }
    // Literal sum of r_hat(k) 2^-k over k up to the largest jump exponent.
    Nat max_e = 0;
    for (const auto& rec : result.trace.records)
      if (rec.jump) max_e = std::max(max_e, *rec.jump);
    DyadicRational budget;
    for (Nat k = 0; k <= max_e; ++k)
      budget += DyadicRational(setup.r_hat(k), 0) * DyadicRational(1, k);
    CHECK(result.trace.x_final <= budget);
  }

  SUBCASE("replay verification is clean and echoes fire repeatedly") {
    auto report = check_trace(result.trace, suite, RhoSpec::one());
    CHECK(report.ok());
    CHECK(report.lower_bound_pairs_checked > 0);
    // The echo requirement (index 1) keeps receiving attention.
    CHECK(report.attention_counts.at(1) >= 3);
  }
}

TEST_CASE("fault injection is caught") {
  auto suite = builtin_suite();
  auto result = run_diagonalization(suite, RhoSpec::one(), 300);

  SUBCASE("an edited jump exponent is flagged at its stage") {
    StageTrace tampered = result.trace;
    for (auto& rec : tampered.records) {
      if (rec.jump && rec.t > 0) {
        rec.jump = *rec.jump + 1;
        auto report = check_trace(tampered, suite, RhoSpec::one());
        CHECK_FALSE(report.ok());
        bool flagged_here = false;
        for (const auto& v : report.violations)
          if (v.stage == rec.t && v.kind == "jump-mismatch") flagged_here = true;
        CHECK(flagged_here);
        break;
      }
    }
  }

  SUBCASE("a skipped countdown decrement is flagged") {
    StageTrace tampered = result.trace;
    for (auto& rec : tampered.records) {
      if (rec.attention && rec.c_before > 0) {
        rec.c_after = rec.c_before;  // pretend the counter did not move
        auto report = check_trace(tampered, suite, RhoSpec::one());
        CHECK_FALSE(report.ok());
        bool flagged = false;
        for (const auto& v : report.violations)
          if (v.kind == "counter-rule") flagged = true;
        CHECK(flagged);
        break;
      }
    }
  }

  SUBCASE("an edited opponent sum is flagged") {
    StageTrace tampered = result.trace;
    tampered.records[5].opponent_sum += DyadicRational(1, 2);
    auto report = check_trace(tampered, suite, RhoSpec::one());
    bool flagged = false;
    for (const auto& v : report.violations)
      if (v.stage == 5 && v.kind == "opponent-sum") flagged = true;
    CHECK(flagged);
  }
}

TEST_CASE("trace serialization round-trips byte-identically") {
  auto suite = builtin_suite();
  auto result = run_diagonalization(suite, RhoSpec::one(), 120);
  std::ostringstream first;
  write_trace_jsonl(first, result.trace);
  StageTrace reread = read_trace_jsonl(*std::make_unique<std::istringstream>(first.str()));
  std::ostringstream second;
  write_trace_jsonl(second, reread);
  CHECK(first.str() == second.str());
  auto report = check_trace(reread, reread.suite, rho_spec_from_label(reread.rho_label));
  CHECK(report.ok());
}

TEST_CASE("rho labels") {
  CHECK(rho_spec_from_label("one").kind == RhoSpec::Kind::one);
  CHECK(rho_spec_from_label("two").kind == RhoSpec::Kind::two);
  auto seq = rho_spec_from_label("seq:3/2");
  CHECK(seq.kind == RhoSpec::Kind::seq);
  CHECK(seq.rho_seq(7) == Rat(3, 2));
  CHECK_THROWS_AS(rho_spec_from_label("sevenish"), invalid_parameter);
  CHECK_THROWS_AS(OpponentSpec::echo(0), invalid_parameter);
}
