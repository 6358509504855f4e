/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roc/modulus.hpp"
#include "roc/name.hpp"
#include "roc/profile.hpp"

namespace roc {

/// Increasing (at least non-decreasing) computable sequence of exact dyadic
/// approximations from below.
struct RationalApproximation {
  std::function<DyadicRational(Nat)> at;
  std::string label;
};

/// x_n = sum over j in [1, n] of 4^-j: the truncations of 1/3 at its even
/// binary digit positions.
RationalApproximation third_truncations();

/// Stagewise revelation of a set of naturals; the induced dyadic values
/// x_{A_n} = sum over a in A_n of 2^-(a+1) must be non-decreasing.
struct SetApproximation {
  std::function<std::vector<Nat>(Nat)> stage;  // finite set at stage n, sorted
  std::string label;
};

/// The even numbers, revealed one per stage: A_n = {0, 2, ..., 2(n-1)}.
SetApproximation evens_set();

/// Cumulative set from per-stage increments.
SetApproximation cumulative_set(std::vector<std::vector<Nat>> increments, std::string label);

/// Greedy binary decomposition of (target - current), truncated as soon as
/// the running sum lands in (target - 2^-slack_exponent, target].  Returns
/// the emitted exponents (strictly increasing); empty when current is
/// already inside the landing interval.
std::vector<Nat> greedy_dyadic_increment(const DyadicRational& current,
                                         const DyadicRational& target, Nat slack_exponent);

struct SolovayStage {
  Nat stage = 0;
  DyadicRational target;
  std::vector<Nat> emitted;
  DyadicRational landed;
  bool in_interval = false;
};

struct SolovayReport {
  std::vector<SolovayStage> stages;
  bool hypothesis_ok = true;
  std::optional<Nat> violated_step;     // first step breaking the increment bound
  bool all_landed = true;
  /// Profile-bound evidence u_f(n) <= n + sum u_g(0..n+c), on windows where
  /// g's profile is complete (n = 0 uses the weighted bound
  /// sum 2^(c-k) u_g(k)).
  std::vector<Nat> profile_checked_levels;
  bool profile_bound_ok = true;
};

struct SolovayResult {
  Name name;
  SolovayReport report;
};

/// Builds a name for the limit of x by greedy landing in
/// (x_{t+1} - 2^-(t+1), x_{t+1}] at stage t, validating the hypothesis
/// x_{t+1} - x_t <= 2^(c - g(t)) online.  On a violation the construction
/// halts and the partial name is returned in the report.
SolovayResult solovay_transfer(const RationalApproximation& x, const Name& g, Nat c,
                               Nat stages);

struct CompileStage {
  Nat stage = 0;
  Nat schedule_index = 0;              // s(stage+1)
  DyadicRational set_value_before;     // x_{B_t}
  DyadicRational set_value_after;      // x_{B_{t+1}}
  std::vector<Nat> multiplicities;     // nu_{k,t} for k = 0..t
  bool balanced = false;               // exact balance equation held
};

struct CompileResult {
  Name name;
  std::vector<CompileStage> stages;
  ModulusCertificate u_modulus;        // g(n) = h(n+1) for the u-series
  bool all_balanced = true;
  /// u_f(h(n)) <= sum over k in [h(n-1), h(n)] of 2^(h(n)-k), on the trace.
  bool jump_bound_ok = true;
  /// Set when the schedule ran out of stages within the budget after at
  /// least one completed stage; the trace up to that point is returned.
  bool stalled = false;
};

/// Compiles a set approximation into a name whose values all lie in the
/// range of h (computable increasing, h(n) >= n+2).  Stage t balances
/// x_{B_{t+1}} - x_{B_t} exactly in denominations 2^-h(0) .. 2^-h(t), where
/// B_{t+1} collects the revealed elements strictly below h(t).
/// `stage_budget` caps how many A-stages the schedule may consume.
CompileResult set_to_reordered_name(const SetApproximation& a,
                                    const std::function<Nat(Nat)>& h, const std::string& h_label,
                                    Nat stage_budget);

/// t = s o r: composes a u-series modulus r with an escape witness s
/// (for all k >= s(n): f(k) >= n) into a raw-series modulus.
ModulusCertificate nearly_computable_upgrade(const ModulusCertificate& r,
                                             const std::function<Int(const Int&)>& s,
                                             const std::string& s_label);

struct SplitReport {
  bool conserved = true;               // u_g + u_h = u_f on complete windows
  std::optional<Nat> checked_upto;     // largest complete level checked
  bool staggered_ok = true;            // both Lemma-style floor conditions
  /// Regaining evidence: for each realized even phase boundary r(2n), the
  /// realized raw tail of g from r(2n) is dominated by its u-series tail
  /// (and symmetrically for h at r(2n+1)).
  bool regaining_ok = true;
};

struct SplitResult {
  Name g;
  Name h;
  SplitReport report;
};

/// Splits a witnessed name into two names whose multiplicity profiles add up
/// to the input's, with the staggered escape conditions: g(k) >= r(2n) for
/// all k >= r(2n), and h(k) >= r(2n+1) for all k >= r(2n+1).  Values are
/// routed one by one to a side whose current floor permits them, preferring
/// the shorter side; if neither side can take a value the split is
/// infeasible for this r.
SplitResult split_name(const Name& f, const std::function<Nat(Nat)>& r,
                       const std::string& r_label, std::size_t prefix_len);

}  // namespace roc
