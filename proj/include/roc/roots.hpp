/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "roc/dyadic.hpp"

namespace roc {

/// Rational enclosure of an n-th root: lo^n <= value <= hi^n with
/// hi - lo <= 2^-grid_exp, or lo == hi when the root is exactly dyadic.
struct RootEnclosure {
  DyadicRational lo;
  DyadicRational hi;

  bool exact() const { return lo == hi; }
};

/// Encloses value^(1/n) for a non-negative integer by bisection on dyadic
/// midpoints.  Every comparison reduces to exact integer power comparison;
/// no floating point is involved.  Requires n >= 1.
RootEnclosure nth_root_enclosure(const Int& value, Nat n, Nat grid_exp = 10);

}  // namespace roc
