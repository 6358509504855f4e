/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/dyadic.hpp"

#include <cctype>

#include "roc/errors.hpp"

namespace roc {

void DyadicRational::canonicalize() {
  if (m_ == 0) {
    e_ = 0;
    return;
  }
  // Strip factors of two from the mantissa while the exponent can absorb them.
  unsigned trailing = boost::multiprecision::lsb(m_ < 0 ? Int(-m_) : m_);
  Nat shift = trailing < e_ ? trailing : e_;
  if (shift > 0) {
    m_ >>= static_cast<unsigned>(shift);
    e_ -= shift;
  }
}

DyadicRational DyadicRational::power_of_two(std::int64_t k) {
  if (k >= 0) return DyadicRational(Int(1) << static_cast<unsigned>(k), 0);
  return DyadicRational(1, static_cast<Nat>(-k));
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  Nat e = a.e_ > b.e_ ? a.e_ : b.e_;
  Int ma = a.m_ << static_cast<unsigned>(e - a.e_);
  Int mb = b.m_ << static_cast<unsigned>(e - b.e_);
  return DyadicRational(ma + mb, e);
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
  Nat e = a.e_ > b.e_ ? a.e_ : b.e_;
  Int ma = a.m_ << static_cast<unsigned>(e - a.e_);
  Int mb = b.m_ << static_cast<unsigned>(e - b.e_);
  return DyadicRational(ma - mb, e);
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return DyadicRational(a.m_ * b.m_, a.e_ + b.e_);
}

int compare(const DyadicRational& a, const DyadicRational& b) {
  Nat e = a.e_ > b.e_ ? a.e_ : b.e_;
  Int ma = a.m_ << static_cast<unsigned>(e - a.e_);
  Int mb = b.m_ << static_cast<unsigned>(e - b.e_);
  if (ma < mb) return -1;
  if (ma > mb) return 1;
  return 0;
}

std::string DyadicRational::to_string() const {
  return m_.str() + "/2^" + std::to_string(e_);
}

DyadicRational DyadicRational::parse(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> void { throw parse_error(what, pos); };

  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::size_t mant_begin = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == mant_begin) fail("expected mantissa digits");
  Int m(std::string(text.substr(mant_begin, pos - mant_begin)));
  if (negative) m = -m;

  if (text.substr(pos, 3) != "/2^") fail("expected '/2^'");
  pos += 3;
  std::size_t exp_begin = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == exp_begin) fail("expected exponent digits");
  if (pos != text.size()) fail("trailing characters");
  Nat e = std::stoull(std::string(text.substr(exp_begin, pos - exp_begin)));
  return DyadicRational(std::move(m), e);
}

Rat DyadicRational::to_rational() const {
  return Rat(m_, Int(1) << static_cast<unsigned>(e_));
}

DyadicRational geometric_tail(Nat n) {
  if (n == 0) return DyadicRational::from_integer(2);
  return DyadicRational(1, n - 1);
}

}  // namespace roc
