/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roc/dyadic.hpp"

namespace roc {

/// Integer-valued sequence term function, n -> value, used for multiplicity
/// profiles and series coefficients.  Values are unbounded integers.
using SeriesFn = std::function<Int(Nat)>;

/// Constructive witness that a name tends to infinity: for every level n and
/// every index k >= at(n), the name value f(k) exceeds n.  `max_level`
/// restricts the certified range of levels (nullopt means all levels).
struct EscapeBound {
  std::function<Nat(Nat)> at;
  std::optional<Nat> max_level;
  std::string provenance;

  bool covers(Nat level) const { return !max_level || level <= *max_level; }
};

/// A name is a stream of natural-number exponents f(0), f(1), ... denoting
/// the dyadic series sum of 2^(-f(k)).  Realized values are memoized; copies
/// share the underlying stream.  Pulling is single-owner; realized prefixes
/// are immutable and safe to read concurrently.
///
/// If an escape bound is attached, every pull is checked against it; a value
/// at index k >= at(n) that fails to exceed n raises certificate_violation.
class Name {
 public:
  Name();

  static Name from_values(std::vector<Nat> values,
                          std::optional<EscapeBound> escape = std::nullopt);
  static Name from_generator(std::function<std::optional<Nat>()> next,
                             std::optional<EscapeBound> escape = std::nullopt);

  /// Realized prefix length.
  std::size_t available() const;
  /// True once the stream reported exhaustion (finite name fully realized).
  bool exhausted() const;

  /// Pulls until `len` values are realized; returns false if the stream ends
  /// first.  Throws certificate_violation on an escape-bound breach.
  bool try_ensure(std::size_t len) const;
  /// Like try_ensure but throws insufficient_data on a short stream.
  void ensure(std::size_t len) const;

  Nat at(std::size_t k) const;
  const std::vector<Nat>& realized() const;
  const std::optional<EscapeBound>& escape() const;

  /// True when the multiplicity of `level` is exactly known from the first
  /// `prefix_len` values: either the escape bound certifies no further
  /// occurrences, or the stream is exhausted within the prefix.
  bool complete_at(Nat level, std::size_t prefix_len) const;

  /// Largest level whose multiplicity is complete at this prefix length, or
  /// nullopt if none is.
  std::optional<Nat> certified_level(std::size_t prefix_len) const;

 private:
  struct State;
  std::shared_ptr<State> s_;
};

// Builtin name families.

/// f(k) = k + a, injective; carries a full escape bound.
Name linear_name(Nat a);

/// f(k) = slope*k + offset with slope >= 1; carries a full escape bound.
Name affine_name(Nat slope, Nat offset);

/// f(k) = 2^k for even k and 1 for odd k; the root-sequence counterexample.
/// No escape bound (the function does not tend to infinity).
Name alternating_counterexample_name();

/// Non-decreasing name that enumerates each value v exactly r(v) times, for a
/// multiplicity function whose dyadic series converges.  Escape bound is the
/// cumulative count of values <= n.
Name multiplicity_name(SeriesFn r, std::string label);

/// Exact partial sum of the name's dyadic series over indices [0, n).
DyadicRational partial_sum(const Name& f, std::size_t n);

}  // namespace roc
