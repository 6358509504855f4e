/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/sigma.hpp"

#include <algorithm>

#include "roc/combinators.hpp"
#include "roc/errors.hpp"

namespace roc {

SigmaEstimate sigma_estimate(const UProfile& u, Nat grid_exp) {
  std::optional<Nat> upto = u.complete_upto();
  if (!upto || *upto < 1)
    throw insufficient_data("sigma estimate needs a complete window reaching n >= 1");
  SigmaEstimate est;
  bool first = true;
  for (Nat n = 1; n <= *upto; ++n) {
    RootEnclosure e = nth_root_enclosure(Int(u.count(n)), n, grid_exp);
    if (first || e.lo > est.window_max.lo) {
      // Track the maximum by lower bound; widen the upper bound alongside.
      if (first || e.hi > est.window_max.hi) est.window_max.hi = e.hi;
      est.window_max.lo = e.lo;
      est.argmax = n;
    } else if (e.hi > est.window_max.hi) {
      est.window_max.hi = e.hi;
    }
    first = false;
  }
  est.below_one = est.window_max.hi < DyadicRational::from_integer(1);
  return est;
}

namespace {

// Completeness-driven prefix length for [0, window], or throw.
std::size_t complete_prefix(const Name& f, Nat window) {
  std::size_t len = f.available();
  if (f.escape() && f.escape()->covers(window)) {
    Nat need = 0;
    for (Nat n = 0; n <= window; ++n) need = std::max(need, f.escape()->at(n));
    len = std::max<std::size_t>(len, need);
  }
  f.try_ensure(len);
  if (f.exhausted()) len = f.available();
  for (Nat n = 0; n <= window; ++n)
    if (!f.complete_at(n, len))
      throw insufficient_data("profile not complete on [0, " + std::to_string(window) + "]");
  return len;
}

}  // namespace

SigmaPreservationReport sigma_preservation_check(const Name& f, const Name& g,
                                                 CombineMode mode, Nat window,
                                                 Nat grid_exp) {
  if (!f.escape() && !f.exhausted())
    throw insufficient_data("sigma preservation needs escape-bound witnesses");
  SigmaPreservationReport report;
  report.window = window;

  std::size_t len_f = complete_prefix(f, window);
  std::size_t len_g = complete_prefix(g, window);
  UProfile uf = u_profile(f, window, len_f);
  UProfile ug = u_profile(g, window, len_g);
  report.f_estimate = sigma_estimate(uf, grid_exp);
  report.g_estimate = sigma_estimate(ug, grid_exp);

  Name combined = mode == CombineMode::sum ? sum_name(f, g) : product_name(f, g);
  std::size_t len_h = complete_prefix(combined, window);
  UProfile uh = u_profile(combined, window, len_h);
  report.combined_estimate = sigma_estimate(uh, grid_exp);

  report.profile_identity_ok = true;
  for (Nat n = 0; n <= window; ++n) {
    Nat expect;
    if (mode == CombineMode::sum) {
      expect = uf.count(n) + ug.count(n);
    } else {
      Nat conv = 0;
      for (Nat k = 0; k <= n; ++k) conv += uf.count(k) * ug.count(n - k);
      expect = conv;
    }
    if (uh.count(n) != expect) report.profile_identity_ok = false;
  }

  if (mode == CombineMode::sum) {
    // Pointwise u_h = u_f + u_g squeezes the window root-max between the
    // larger input maximum and that maximum scaled by 2^(1/n_min), where
    // n_min is the smaller input argmax.
    const RootEnclosure& a = report.f_estimate.window_max;
    const RootEnclosure& b = report.g_estimate.window_max;
    const RootEnclosure& c = report.combined_estimate.window_max;
    DyadicRational input_lo = std::max(a.lo, b.lo);
    DyadicRational input_hi = std::max(a.hi, b.hi);
    Nat n_min = std::max<Nat>(1, std::min(report.f_estimate.argmax, report.g_estimate.argmax));
    bool lower_ok = c.hi >= input_lo;  // combined >= max(inputs), enclosure-safe
    RootEnclosure two_root = nth_root_enclosure(2, n_min, grid_exp);
    bool upper_ok = c.lo <= input_hi * two_root.hi;
    report.bound_ok = lower_ok && upper_ok;
  } else {
    // u_h(n) <= c_f * c_g * (n+1) * R^n with R = max input root-max upper
    // bound and c the window-max of u(n) / R^n, all compared exactly in
    // rational arithmetic.
    Rat R = std::max(report.f_estimate.window_max.hi.to_rational(),
                     report.g_estimate.window_max.hi.to_rational());
    if (R < 1) R = 1;
    auto window_constant = [&](const UProfile& u) -> Rat {
      Rat c(1);
      Rat power(1);  // R^n
      for (Nat n = 0; n <= window; ++n) {
        if (u.count(n) > 0) {
          Rat ratio = Rat(Int(u.count(n))) / power;
          if (ratio > c) c = ratio;
        }
        power *= R;
      }
      return c;
    };
    Rat cf = window_constant(uf);
    Rat cg = window_constant(ug);
    report.bound_ok = true;
    Rat power(1);
    for (Nat n = 0; n <= window; ++n) {
      Rat bound = cf * cg * Rat(Int(n) + 1) * power;
      if (Rat(Int(uh.count(n))) > bound) report.bound_ok = false;
      power *= R;
    }
  }
  return report;
}

}  // namespace roc
