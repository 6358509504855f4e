/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <optional>

#include "roc/profile.hpp"
#include "roc/roots.hpp"

namespace roc {

/// Window estimate of the largest n-th root of u(n) over the complete part
/// of a profile (n >= 1).  This is evidence about one name, never a value of
/// the infimum over all names.
struct SigmaEstimate {
  RootEnclosure window_max;
  Nat argmax = 0;
  /// Set when every complete entry is zero or the window max falls below 1
  /// (sparse names); the enclosure is still reported as computed.
  bool below_one = false;
};

SigmaEstimate sigma_estimate(const UProfile& u, Nat grid_exp = 10);

enum class CombineMode { sum, product };

struct SigmaPreservationReport {
  /// Pointwise profile identity (sum: u_h = u_f + u_g; product: convolution)
  /// verified by exact counting on the combined name.
  bool profile_identity_ok = false;
  /// Sum mode: max(inputs) <= combined <= max(inputs) * 2^(1/n_min), as
  /// enclosure-safe inequalities.  Product mode: u_h(n) <= c_f c_g (n+1) R^n
  /// with R the larger input root-max upper bound, exactly.
  bool bound_ok = false;
  SigmaEstimate f_estimate;
  SigmaEstimate g_estimate;
  SigmaEstimate combined_estimate;
  Nat window = 0;
};

/// Checks the sum/product preservation identities on a complete window by
/// exact counting, plus the window root-max relation with its explicitly
/// computed slack.  Both names must certify completeness on [0, window].
SigmaPreservationReport sigma_preservation_check(const Name& f, const Name& g,
                                                 CombineMode mode, Nat window,
                                                 Nat grid_exp = 10);

}  // namespace roc
