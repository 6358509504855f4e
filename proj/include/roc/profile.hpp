/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <utility>
#include <vector>

#include "roc/name.hpp"

namespace roc {

/// Finite window of multiplicities u_f(n) for n in [0, n_max], counted over a
/// realized prefix.  complete[n] is true exactly when count[n] is the true
/// multiplicity (certified by an escape bound or by stream exhaustion).
struct UProfile {
  Nat n_max = 0;
  std::size_t prefix_len = 0;
  std::vector<Nat> counts;
  std::vector<bool> complete;

  Nat count(Nat n) const { return counts.at(n); }
  bool is_complete(Nat n) const { return complete.at(n); }
  /// Largest n such that every entry in [0, n] is complete, or nullopt.
  std::optional<Nat> complete_upto() const;
};

UProfile u_profile(const Name& f, Nat n_max, std::size_t prefix_len);

/// Non-decreasing rearrangement of the first prefix_len values.  If f carries
/// an escape bound, the result agrees with the true sorted name up to the
/// cumulative count of the largest certified level and carries a derived
/// escape bound.
Name star(const Name& f, std::size_t prefix_len);

/// Finite partial permutation sigma with f(sigma(k)) = g(k), matching equal
/// values in ascending index order.  Requires the u-profiles of f and g to be
/// complete and to agree on [0, window].
struct Permutation {
  /// Pairs (g_index, f_index), sorted by g_index.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

Permutation find_permutation(const Name& f, const Name& g, Nat window);

/// Exact tails (sum over k in [n, len) of 2^-f*(k), same for f(sigma(k))).
/// sigma must be a permutation of [0, len).  The first component is never
/// larger than the second: the sorted rearrangement converges fastest.
std::pair<DyadicRational, DyadicRational> compare_tails(const Name& f,
                                                        const std::vector<std::size_t>& sigma,
                                                        std::size_t n, std::size_t len);

}  // namespace roc
