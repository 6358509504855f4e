/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/combinators.hpp"

#include <algorithm>
#include <memory>

#include "roc/errors.hpp"

namespace roc {

Name sum_name(Name f, Name g) {
  std::optional<EscapeBound> escape;
  if (f.escape() && g.escape()) {
    EscapeBound ef = *f.escape();
    EscapeBound eg = *g.escape();
    std::optional<Nat> max_level;
    if (ef.max_level || eg.max_level)
      max_level = std::min(ef.max_level.value_or(Nat(-1)), eg.max_level.value_or(Nat(-1)));
    escape = EscapeBound{
        [ef, eg](Nat n) -> Nat { return 2 * std::max(ef.at(n), eg.at(n)) + 1; },
        max_level,
        "interleave(" + ef.provenance + ", " + eg.provenance + ")"};
  }
  auto k = std::make_shared<std::size_t>(0);
  return Name::from_generator(
      [k, f, g]() -> std::optional<Nat> {
        std::size_t i = (*k)++;
        Name source = (i % 2 == 0) ? f : g;
        std::size_t j = i / 2;
        if (!source.try_ensure(j + 1)) return std::nullopt;
        return source.at(j);
      },
      escape);
}

ModulusCertificate sum_modulus(const ModulusCertificate& r, const ModulusCertificate& s) {
  if (r.target != SeriesTarget::u_series || s.target != SeriesTarget::u_series)
    throw invalid_parameter("sum_modulus expects u-series certificates");
  auto ra = r.at;
  auto sa = s.at;
  ModulusCertificate out;
  out.target = SeriesTarget::u_series;
  out.conditional = r.conditional || s.conditional;
  out.provenance = "sum-of(" + r.provenance + "; " + s.provenance + ")";
  out.at = [ra, sa](Nat n) -> Int { return std::max(ra(n + 1), sa(n + 1)); };
  return out;
}

Name product_name(Name f, Name g) {
  std::optional<EscapeBound> escape;
  if (f.escape() && g.escape()) {
    EscapeBound ef = *f.escape();
    EscapeBound eg = *g.escape();
    std::optional<Nat> max_level;
    if (ef.max_level || eg.max_level)
      max_level = std::min(ef.max_level.value_or(Nat(-1)), eg.max_level.value_or(Nat(-1)));
    escape = EscapeBound{
        [ef, eg](Nat n) -> Nat {
          Nat diag = ef.at(n) + eg.at(n);
          return diag * (diag + 1) / 2;  // cells of diagonals 0 .. diag-1
        },
        max_level,
        "diagonal-pairs(" + ef.provenance + ", " + eg.provenance + ")"};
  }
  struct Cursor {
    std::size_t l = 0;
    std::size_t k = 0;
  };
  auto cur = std::make_shared<Cursor>();
  return Name::from_generator(
      [cur, f, g]() -> std::optional<Nat> {
        if (!f.try_ensure(cur->l + 1) || !g.try_ensure(cur->l + 1)) return std::nullopt;
        Nat value = f.at(cur->k) + g.at(cur->l - cur->k);
        if (cur->k == cur->l) {
          ++cur->l;
          cur->k = 0;
        } else {
          ++cur->k;
        }
        return value;
      },
      escape);
}

ModulusCertificate product_modulus(const ModulusCertificate& r, const ModulusCertificate& s,
                                   Nat c) {
  if (r.target != SeriesTarget::sorted || s.target != SeriesTarget::sorted)
    throw invalid_parameter("product_modulus expects sorted-series certificates");
  auto ra = r.at;
  auto sa = s.at;
  ModulusCertificate out;
  out.target = SeriesTarget::diagonal;
  out.conditional = r.conditional || s.conditional;
  out.provenance = "product-of(" + r.provenance + "; " + s.provenance +
                   "; c=" + std::to_string(c) + ")";
  out.at = [ra, sa, c](Nat n) -> Int { return 2 * std::max(ra(n + c + 2), sa(n + c + 2)); };
  return out;
}

ModulusCertificate product_modulus_sorted(const ModulusCertificate& r,
                                          const ModulusCertificate& s, Nat c) {
  ModulusCertificate diag = product_modulus(r, s, c);
  auto base = diag.at;
  ModulusCertificate out;
  out.target = SeriesTarget::sorted;
  out.conditional = diag.conditional;
  out.provenance = diag.provenance + " [flattened]";
  out.at = [base](Nat n) -> Int {
    Int t = base(n);
    return t * (t + 1) / 2;
  };
  return out;
}

}  // namespace roc
