/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/profile.hpp"

#include <algorithm>
#include <map>

#include "roc/errors.hpp"

namespace roc {

std::optional<Nat> UProfile::complete_upto() const {
  std::optional<Nat> upto;
  for (Nat n = 0; n <= n_max; ++n) {
    if (!complete[n]) break;
    upto = n;
  }
  return upto;
}

UProfile u_profile(const Name& f, Nat n_max, std::size_t prefix_len) {
  f.ensure(prefix_len);
  UProfile p;
  p.n_max = n_max;
  p.prefix_len = prefix_len;
  p.counts.assign(n_max + 1, 0);
  p.complete.assign(n_max + 1, false);
  for (std::size_t k = 0; k < prefix_len; ++k) {
    Nat v = f.at(k);
    if (v <= n_max) ++p.counts[v];
  }
  for (Nat n = 0; n <= n_max; ++n) p.complete[n] = f.complete_at(n, prefix_len);
  return p;
}

Name star(const Name& f, std::size_t prefix_len) {
  f.ensure(prefix_len);
  std::vector<Nat> sorted(f.realized().begin(), f.realized().begin() + prefix_len);
  std::sort(sorted.begin(), sorted.end());
  // The sorted prefix is a finite non-decreasing stream; occurrences of any
  // level n all sit before the count of values <= n, which is exactly an
  // escape bound for the stream itself.
  auto holder = std::make_shared<std::vector<Nat>>(sorted);
  EscapeBound derived{
      [holder](Nat n) -> Nat {
        return static_cast<Nat>(std::upper_bound(holder->begin(), holder->end(), n) -
                                holder->begin());
      },
      std::nullopt,
      "sorted-prefix"};
  return Name::from_values(std::move(sorted), derived);
}

Permutation find_permutation(const Name& f, const Name& g, Nat window) {
  // Completeness on [0, window] dictates how much of each stream we must pull.
  auto required_len = [window](const Name& h) -> std::size_t {
    std::size_t len = h.available();
    if (h.escape() && h.escape()->covers(window)) {
      Nat need = 0;
      for (Nat n = 0; n <= window; ++n) need = std::max(need, h.escape()->at(n));
      len = std::max<std::size_t>(len, need);
    }
    h.try_ensure(len);
    if (h.exhausted()) return h.available();
    return len;
  };
  std::size_t len_f = required_len(f);
  std::size_t len_g = required_len(g);
  for (Nat n = 0; n <= window; ++n) {
    if (!f.complete_at(n, len_f) || !g.complete_at(n, len_g))
      throw insufficient_data("u-profiles are not complete on [0, " +
                              std::to_string(window) + "]");
  }

  std::map<Nat, std::vector<std::size_t>> f_sites, g_sites;
  for (std::size_t k = 0; k < len_f; ++k)
    if (f.at(k) <= window) f_sites[f.at(k)].push_back(k);
  for (std::size_t k = 0; k < len_g; ++k)
    if (g.at(k) <= window) g_sites[g.at(k)].push_back(k);

  if (f_sites.size() != g_sites.size())
    throw no_permutation_error("u-profiles disagree on [0, " + std::to_string(window) + "]");
  Permutation sigma;
  for (const auto& [value, fi] : f_sites) {
    auto it = g_sites.find(value);
    if (it == g_sites.end() || it->second.size() != fi.size())
      throw no_permutation_error("multiplicity of " + std::to_string(value) + " differs");
    for (std::size_t i = 0; i < fi.size(); ++i)
      sigma.pairs.emplace_back(it->second[i], fi[i]);
  }
  std::sort(sigma.pairs.begin(), sigma.pairs.end());
  return sigma;
}

std::pair<DyadicRational, DyadicRational> compare_tails(const Name& f,
                                                        const std::vector<std::size_t>& sigma,
                                                        std::size_t n, std::size_t len) {
  if (sigma.size() != len) throw invalid_parameter("sigma must permute [0, len)");
  std::vector<bool> seen(len, false);
  for (std::size_t s : sigma) {
    if (s >= len || seen[s]) throw invalid_parameter("sigma is not a permutation of [0, len)");
    seen[s] = true;
  }
  if (n > len) throw invalid_parameter("tail start exceeds prefix length");
  f.ensure(len);
  std::vector<Nat> sorted(f.realized().begin(), f.realized().begin() + len);
  std::sort(sorted.begin(), sorted.end());
  DyadicRational sorted_tail, permuted_tail;
  for (std::size_t k = n; k < len; ++k) {
    sorted_tail += DyadicRational(1, sorted[k]);
    permuted_tail += DyadicRational(1, f.at(sigma[k]));
  }
  return {sorted_tail, permuted_tail};
}

}  // namespace roc
