/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/roots.hpp"

#include "roc/errors.hpp"

namespace roc {

namespace {

// Compares candidate^n with value, where candidate = m * 2^-e.
// candidate^n = m^n * 2^-(e*n), so the test is m^n vs value << (e*n).
int compare_power(const DyadicRational& candidate, Nat n, const Int& value) {
  Int lhs = boost::multiprecision::pow(candidate.mantissa(),
                                       static_cast<unsigned>(n));
  Int rhs = value << static_cast<unsigned>(candidate.exponent() * n);
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace

RootEnclosure nth_root_enclosure(const Int& value, Nat n, Nat grid_exp) {
  if (n == 0) throw invalid_parameter("0th root is undefined");
  if (value < 0) throw invalid_parameter("nth_root_enclosure expects a non-negative value");
  if (value == 0) return {DyadicRational(), DyadicRational()};

  // Find the least power of two whose n-th power reaches the value.
  DyadicRational hi = DyadicRational::from_integer(1);
  while (compare_power(hi, n, value) < 0) hi = hi + hi;
  if (compare_power(hi, n, value) == 0) return {hi, hi};

  // value >= 2 here, so hi >= 2 and lo = hi/2 satisfies lo^n < value.
  DyadicRational lo = hi * DyadicRational(1, 1);

  DyadicRational width = DyadicRational(1, grid_exp);
  DyadicRational half(1, 1);
  while (hi - lo > width) {
    DyadicRational mid = (lo + hi) * half;
    int cmp = compare_power(mid, n, value);
    if (cmp == 0) return {mid, mid};
    if (cmp < 0)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace roc
