/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace roc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Nat = std::uint64_t;

/// Exact dyadic rational `mantissa * 2^(-exponent)` with a non-negative
/// exponent.  Canonical form keeps the exponent minimal: either the mantissa
/// is odd, or the exponent is zero.  Zero is stored as (0, 0).
///
/// The type is closed under addition, subtraction and multiplication; there
/// is no rounding anywhere.  Values are immutable after construction and safe
/// to share across threads.
class DyadicRational {
 public:
  DyadicRational() : m_(0), e_(0) {}
  DyadicRational(Int mantissa, Nat exponent) : m_(std::move(mantissa)), e_(exponent) {
    canonicalize();
  }

  static DyadicRational from_integer(Int v) { return DyadicRational(std::move(v), 0); }

  /// 2^k for any integer k (negative k yields 1/2^|k|).
  static DyadicRational power_of_two(std::int64_t k);

  const Int& mantissa() const { return m_; }
  Nat exponent() const { return e_; }

  bool is_zero() const { return m_ == 0; }
  int sign() const { return m_ == 0 ? 0 : (m_ < 0 ? -1 : 1); }
  DyadicRational abs() const { return m_ < 0 ? DyadicRational(-m_, e_) : *this; }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  DyadicRational operator-() const { return DyadicRational(-m_, e_); }
  DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
  DyadicRational& operator-=(const DyadicRational& o) { return *this = *this - o; }

  /// Total order; exponents are normalized by shifting the smaller-exponent
  /// mantissa, so no division ever happens.
  friend int compare(const DyadicRational& a, const DyadicRational& b);
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const DyadicRational& a, const DyadicRational& b) {
    return compare(a, b) != 0;
  }
  friend bool operator<(const DyadicRational& a, const DyadicRational& b) {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const DyadicRational& a, const DyadicRational& b) {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const DyadicRational& a, const DyadicRational& b) {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const DyadicRational& a, const DyadicRational& b) {
    return compare(a, b) >= 0;
  }

  /// Text form "m/2^e" with m in decimal, e.g. "7/2^3".
  std::string to_string() const;

  /// Parses "m/2^e"; non-canonical input (even mantissa with positive
  /// exponent) is accepted and canonicalized.
  static DyadicRational parse(std::string_view text);

  Rat to_rational() const;

 private:
  void canonicalize();

  Int m_;
  Nat e_;
};

/// Closed-form geometric tail: sum over k >= n of 2^(-k), which is 2^(-n+1).
DyadicRational geometric_tail(Nat n);

}  // namespace roc
