/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/modulus.hpp"

#include <memory>

#include "roc/errors.hpp"

namespace roc {

std::string to_string(SeriesTarget t) {
  switch (t) {
    case SeriesTarget::raw: return "raw";
    case SeriesTarget::sorted: return "sorted";
    case SeriesTarget::u_series: return "u-series";
    case SeriesTarget::diagonal: return "diagonal";
  }
  return "?";
}

ModulusCertificate strictly_increasing(const ModulusCertificate& cert) {
  struct Memo {
    std::vector<Int> values;
  };
  auto memo = std::make_shared<Memo>();
  auto base = cert.at;
  ModulusCertificate out = cert;
  out.provenance = cert.provenance + " [strictified]";
  out.at = [memo, base](Nat n) -> Int {
    while (memo->values.size() <= n) {
      Nat k = memo->values.size();
      Int v = base(k);
      if (k > 0 && v <= memo->values.back()) v = memo->values.back() + 1;
      memo->values.push_back(v);
    }
    return memo->values[n];
  };
  return out;
}

ModulusCertificate regular_modulus(Nat c) {
  return ModulusCertificate{
      [c](Nat n) -> Int { return Int(n) + c + 1; },
      SeriesTarget::u_series,
      "regular(u_f <= 2^" + std::to_string(c) + ")",
      false};
}

ModulusCertificate group_modulus(const ModulusCertificate& cert, GroupDirection direction,
                                 Nat c,
                                 const std::optional<std::vector<Nat>>& sorted_window,
                                 const std::optional<std::vector<Int>>& u_window) {
  if (direction == GroupDirection::sorted_to_u) {
    if (cert.target != SeriesTarget::sorted)
      throw invalid_parameter("sorted_to_u expects a sorted-series certificate");
    bool confirmed = false;
    if (sorted_window) {
      confirmed = true;
      for (std::size_t n = 0; n < sorted_window->size(); ++n)
        if ((*sorted_window)[n] > n) confirmed = false;
    }
    ModulusCertificate out = cert;
    out.target = SeriesTarget::u_series;
    out.conditional = cert.conditional || !confirmed;
    out.provenance = cert.provenance + " [grouped" +
                     (confirmed ? "" : ", f*(n)<=n unverified") + "]";
    return out;
  }

  if (cert.target != SeriesTarget::u_series)
    throw invalid_parameter("u_to_sorted expects a u-series certificate");
  if (u_window) {
    DyadicRational sum;
    for (std::size_t k = 0; k < u_window->size(); ++k)
      sum += DyadicRational((*u_window)[k], 0) * DyadicRational(1, k);
    if (sum > DyadicRational::power_of_two(static_cast<std::int64_t>(c)))
      throw bound_violation("u-series window sum exceeds 2^" + std::to_string(c));
  }
  auto base = cert.at;
  ModulusCertificate out;
  out.target = SeriesTarget::sorted;
  out.conditional = cert.conditional;
  out.provenance = cert.provenance + " [ungrouped, c=" + std::to_string(c) + "]";
  out.at = [base, c](Nat n) -> Int {
    Int s = base(n);
    if (s == 0) return 0;
    if (s > 1u << 20)
      throw budget_exceeded("u_to_sorted index 2^" + s.str() + " is out of desk scale");
    unsigned shift = s.convert_to<unsigned>();
    return (Int(1) << (shift + c)) - (Int(1) << c);
  };
  return out;
}

CertificateValidation validate_certificate(
    const ModulusCertificate& cert,
    const std::function<DyadicRational(const Int& index)>& tail_upper_bound, Nat n_lo,
    Nat n_hi) {
  CertificateValidation v;
  for (Nat n = n_lo; n <= n_hi; ++n) {
    DyadicRational tail = tail_upper_bound(cert.at(n));
    if (tail > DyadicRational(1, n)) {
      v.ok = false;
      v.failed_levels.push_back(n);
    }
  }
  return v;
}

}  // namespace roc
