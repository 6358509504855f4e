/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roc/analysis.hpp"
#include "roc/modulus.hpp"
#include "roc/name.hpp"

namespace roc {

/// Cantor pairing t = (i+j)(i+j+1)/2 + j, with its inverse.
Nat pair_index(Nat i, Nat j);
std::pair<Nat, Nat> unpair_index(Nat t);

/// Step-budgeted opponents simulating partial evaluators: phi(k) at budget t
/// either yields a value or stays pending.  Convergence is monotone: once a
/// value appears at budget t, the same value appears at every larger budget.
struct OpponentSpec {
  enum class Kind { divergent, echo, table } kind = Kind::divergent;
  /// echo: replays the run's own published jumps with this delay (>= 1).
  Nat delay = 1;
  /// table: tuples (input k, value, convergence budget).
  std::vector<std::array<Nat, 3>> entries;

  static OpponentSpec divergent();
  static OpponentSpec echo(Nat delay);
  static OpponentSpec table(std::vector<std::array<Nat, 3>> entries);
};

using OpponentSuite = std::vector<OpponentSpec>;

/// divergent + echo(3) + a small fixed table, exercising both the
/// attention-firing and the attention-starving paths.
OpponentSuite builtin_suite();

/// One transition of the staged construction; stage t handles the pair
/// (i, j) with Cantor code t and produces x_{t+1} from x_t.
struct StageRecord {
  Nat t = 0;
  Nat i = 0;
  Nat j = 0;
  bool attention = false;
  DyadicRational x_before;
  DyadicRational opponent_sum;
  std::optional<Nat> jump;  // emitted exponent, when attention fires
  Nat w_before = 0;
  Nat w_after = 0;
  Int c_before;
  Int c_after;
};

struct StageTrace {
  Nat stages = 0;
  std::string rho_label;
  OpponentSuite suite;
  std::vector<StageRecord> records;
  DyadicRational x_final;
};

struct DiagResult {
  Name name;  // jump exponents in stage order
  StageTrace trace;
};

/// Memoized schedule s: s(0) is the first index where the staged budget
/// function is positive; s(n+1) is the least index past s(n) at which a
/// certified upper bound on the weighted tail drops to half of 2^-s(n).
/// The bound combines a literal window sum, a monotonicity pad for the
/// mid-range, and the certificate anchor for the far tail, so the produced
/// s always satisfies the defining tail inequality (possibly with larger
/// than minimal values).
class Schedule {
 public:
  /// r_hat must be non-decreasing with r_hat-weighted dyadic series
  /// converging; cert certifies that series (u-series target).
  Schedule(SeriesFn r_hat, ModulusCertificate cert);

  Nat at(Nat n);
  /// Sound upper bound on sum over k >= m of r_hat(k) 2^-k.
  DyadicRational tail_upper_bound(Nat m, Nat precision);
  const std::vector<Nat>& computed() const { return values_; }

 private:
  void extend();
  Int rhat_at(Nat k);
  Nat anchor_for(Nat precision);
  DyadicRational bound_with_anchor(Nat m, Nat precision, Nat anchor);

  SeriesFn r_hat_;
  ModulusCertificate cert_;
  std::vector<Int> rhat_memo_;
  std::vector<Nat> values_;
};

/// Builds the r-hat schedule context for a rho spec: r from rho_generator,
/// r_hat its prefix sums, and the certificate lifted through the prefix-sum
/// transfer with an automatically determined series bound exponent.
struct DiagSetup {
  SeriesFn r;
  SeriesFn r_hat;
  ModulusCertificate r_hat_cert;
};

DiagSetup make_diag_setup(const RhoSpec& spec);

/// Runs the staged construction for `stages` transitions against the suite
/// (requirement indices beyond the suite behave as everywhere-divergent).
DiagResult run_diagonalization(const OpponentSuite& suite, const RhoSpec& spec, Nat stages);

/// Extracted name: the jump exponents in stage order.
Name extract_name(const StageTrace& trace);

struct TraceViolation {
  Nat stage = 0;
  std::string kind;
  std::string detail;
};

struct TraceCheckReport {
  std::vector<TraceViolation> violations;
  std::map<Nat, Nat> attention_counts;   // requirement -> attentions seen
  Nat lower_bound_pairs_checked = 0;     // consecutive attention pairs
  Nat upper_bound_pairs_checked = 0;     // pairs meeting the side condition
  Nat completed_blocks_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Independently recomputes every transition (pairing, opponent sums,
/// attention condition, jump, witness-block and countdown updates), then
/// checks the per-requirement attention-gap bounds, the completed-block
/// jump-count equalities, monotonicity of x, the per-exponent jump budget,
/// and the exact total bound on the sum of jumps.  Violations become report
/// entries, never exceptions.
TraceCheckReport check_trace(const StageTrace& trace, const OpponentSuite& suite,
                             const RhoSpec& spec);

/// JSON-lines trace serialization; byte-stable for identical traces.
void write_trace_jsonl(std::ostream& out, const StageTrace& trace);
StageTrace read_trace_jsonl(std::istream& in);

/// Parses/serializes rho labels ("one", "two", "seq:N/D") used in traces.
RhoSpec rho_spec_from_label(const std::string& label);

}  // namespace roc
