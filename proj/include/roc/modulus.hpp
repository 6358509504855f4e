/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roc/name.hpp"

namespace roc {

/// Which series a certificate speaks about.
enum class SeriesTarget {
  raw,       // sum of 2^-f(k) in enumeration order
  sorted,    // sum of 2^-f*(k) over the non-decreasing rearrangement
  u_series,  // coefficient series: sum of u(k) * 2^-k
  diagonal   // Cauchy-product series indexed by diagonal
};

std::string to_string(SeriesTarget t);

/// Monotone index function s with the contract that the tail of the target
/// series past index s(n) is at most 2^-n.  `conditional` marks certificates
/// whose hypothesis was only confirmed on an inspected window.
struct ModulusCertificate {
  std::function<Int(Nat)> at;
  SeriesTarget target = SeriesTarget::raw;
  std::string provenance;
  bool conditional = false;

  Int operator()(Nat n) const { return at(n); }
};

/// Wraps a certificate so the index function is strictly increasing (running
/// maximum plus one); a larger index function is still a modulus.
ModulusCertificate strictly_increasing(const ModulusCertificate& cert);

/// If u_f(n) <= 2^c for all n, then s(n) = n + c + 1 is a modulus for the
/// u-series.  The bound on u_f is the caller's responsibility.
ModulusCertificate regular_modulus(Nat c);

enum class GroupDirection { sorted_to_u, u_to_sorted };

/// Transfers a modulus between the sorted series and the u-series.
///
/// sorted_to_u reuses the index function unchanged; it is valid as stated
/// when the sorted name satisfies f*(n) <= n on the inspected window (the
/// u_f(n) >= 1 normalization).  When `sorted_window` confirms this the
/// certificate is unconditional, otherwise it is flagged conditional.
///
/// u_to_sorted produces t(n) = sum over k < s(n) of 2^(c+k) = 2^c*(2^s(n)-1),
/// where c must satisfy: the u-series total is at most 2^c.  If `u_window`
/// is supplied and its partial sum already exceeds 2^c, bound_violation is
/// raised.
ModulusCertificate group_modulus(const ModulusCertificate& cert, GroupDirection direction,
                                 Nat c,
                                 const std::optional<std::vector<Nat>>& sorted_window =
                                     std::nullopt,
                                 const std::optional<std::vector<Int>>& u_window =
                                     std::nullopt);

/// Checks tail(s(n)) <= 2^-n for n in [n_lo, n_hi] against a caller-supplied
/// exact upper bound on the target series tail past a given index.
struct CertificateValidation {
  bool ok = true;
  std::vector<Nat> failed_levels;
};

CertificateValidation validate_certificate(
    const ModulusCertificate& cert,
    const std::function<DyadicRational(const Int& index)>& tail_upper_bound, Nat n_lo,
    Nat n_hi);

}  // namespace roc
