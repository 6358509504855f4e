/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/transfer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "roc/errors.hpp"

namespace roc {

RationalApproximation third_truncations() {
  return RationalApproximation{
      [](Nat n) -> DyadicRational {
        // sum_{j=1..n} 4^-j = ((4^n - 1) / 3) * 4^-n
        Int mant = ((Int(1) << static_cast<unsigned>(2 * n)) - 1) / 3;
        return DyadicRational(mant, 2 * n);
      },
      "third"};
}

SetApproximation evens_set() {
  return SetApproximation{
      [](Nat n) -> std::vector<Nat> {
        std::vector<Nat> out;
        for (Nat i = 0; i < n; ++i) out.push_back(2 * i);
        return out;
      },
      "evens"};
}

SetApproximation cumulative_set(std::vector<std::vector<Nat>> increments, std::string label) {
  auto incs = std::make_shared<std::vector<std::vector<Nat>>>(std::move(increments));
  return SetApproximation{
      [incs](Nat n) -> std::vector<Nat> {
        std::set<Nat> acc;
        for (Nat i = 0; i < n && i < incs->size(); ++i)
          acc.insert((*incs)[i].begin(), (*incs)[i].end());
        return std::vector<Nat>(acc.begin(), acc.end());
      },
      std::move(label)};
}

std::vector<Nat> greedy_dyadic_increment(const DyadicRational& current,
                                         const DyadicRational& target, Nat slack_exponent) {
  if (current > target) throw invalid_parameter("greedy increment needs current <= target");
  DyadicRational delta = target - current;
  DyadicRational slack(1, slack_exponent);
  std::vector<Nat> out;
  while (delta >= slack) {
    // Largest 2^-e not exceeding delta, with e a natural number.
    Nat e = 0;
    if (delta < DyadicRational::from_integer(1)) {
      unsigned top = boost::multiprecision::msb(delta.mantissa());
      e = delta.exponent() - top;
    }
    out.push_back(e);
    delta -= DyadicRational(1, e);
  }
  return out;
}

SolovayResult solovay_transfer(const RationalApproximation& x, const Name& g, Nat c,
                               Nat stages) {
  SolovayResult result;
  SolovayReport& report = result.report;
  std::vector<Nat> jumps;
  DyadicRational current;
  DyadicRational prev = x.at(0);
  for (Nat t = 0; t < stages; ++t) {
    DyadicRational next = x.at(t + 1);
    Nat gt = g.at(t);
    DyadicRational bound =
        DyadicRational::power_of_two(static_cast<std::int64_t>(c) - static_cast<std::int64_t>(gt));
    if (next < prev || next - prev > bound) {
      report.hypothesis_ok = false;
      report.violated_step = t;
      break;
    }
    SolovayStage stage;
    stage.stage = t;
    stage.target = next;
    stage.emitted = greedy_dyadic_increment(current, next, t + 1);
    for (Nat e : stage.emitted) {
      current += DyadicRational(1, e);
      jumps.push_back(e);
    }
    stage.landed = current;
    stage.in_interval = current <= next && next - current < DyadicRational(1, t + 1);
    report.all_landed = report.all_landed && stage.in_interval;
    report.stages.push_back(std::move(stage));
    prev = next;
  }
  result.name = Name::from_values(jumps);

  // Profile-bound evidence on windows where g's profile is complete.
  std::size_t pulled = g.available();
  Nat max_jump = 0;
  for (Nat e : jumps) max_jump = std::max(max_jump, e);
  std::map<Nat, Nat> uf, ug;
  for (Nat e : jumps) ++uf[e];
  for (std::size_t i = 0; i < pulled; ++i) ++ug[g.at(i)];
  auto ug_count = [&ug](Nat k) -> Nat {
    auto it = ug.find(k);
    return it == ug.end() ? 0 : it->second;
  };
  for (Nat n = 0; n <= max_jump; ++n) {
    if (!g.complete_at(n + c, pulled)) break;
    Int bound;
    if (n == 0) {
      // Weighted form: sum over k <= c of 2^(c-k) * u_g(k).
      for (Nat k = 0; k <= c; ++k)
        bound += Int(ug_count(k)) << static_cast<unsigned>(c - k);
    } else {
      bound = Int(n);
      for (Nat k = 0; k <= n + c; ++k) bound += ug_count(k);
    }
    auto it = uf.find(n);
    Nat actual = it == uf.end() ? 0 : it->second;
    if (Int(actual) > bound) report.profile_bound_ok = false;
    report.profile_checked_levels.push_back(n);
  }
  return result;
}

CompileResult set_to_reordered_name(const SetApproximation& a,
                                    const std::function<Nat(Nat)>& h, const std::string& h_label,
                                    Nat stage_budget) {
  auto set_value = [](const std::vector<Nat>& elements, Nat below) -> DyadicRational {
    DyadicRational v;
    for (Nat e : elements)
      if (e < below) v += DyadicRational(1, e + 1);
    return v;
  };

  CompileResult result;
  std::vector<Nat> emitted;
  std::vector<Nat> h_values;  // h(0..t), validated increasing with h(n) >= n+2
  auto h_at = [&](Nat n) -> Nat {
    while (h_values.size() <= n) {
      Nat k = h_values.size();
      Nat v = h(k);
      if (v < k + 2)
        throw invalid_parameter("h(" + std::to_string(k) + ") = " + std::to_string(v) +
                                " violates h(n) >= n+2");
      if (!h_values.empty() && v <= h_values.back())
        throw invalid_parameter("h must be increasing");
      h_values.push_back(v);
    }
    return h_values[n];
  };

  Nat s_prev = 0;
  DyadicRational x_prev;  // x_{B_0} = 0
  Nat t = 0;
  for (;; ++t) {
    // Schedule: s(t+1) = min m > s(t) with {h(0), ..., h(t)} in A_m.
    Nat s_next = 0;
    bool found = false;
    for (Nat m = s_prev + 1; m <= stage_budget; ++m) {
      std::vector<Nat> am = a.stage(m);
      bool contains_all = true;
      for (Nat k = 0; k <= t && contains_all; ++k)
        contains_all = std::binary_search(am.begin(), am.end(), h_at(k));
      if (contains_all) {
        s_next = m;
        found = true;
        break;
      }
    }
    if (!found) {
      if (t == 0)
        throw schedule_stall("no stage of " + a.label + " contains h(0) = " +
                             std::to_string(h_at(0)) + " within budget " +
                             std::to_string(stage_budget));
      result.stalled = true;
      break;  // schedule exhausted: the construction ends with a partial trace
    }

    std::vector<Nat> revealed = a.stage(s_next);
    DyadicRational x_next = set_value(revealed, h_at(t));  // elements strictly below h(t)
    DyadicRational delta = x_next - x_prev;
    if (delta.sign() < 0)
      throw denomination_error("restricted set value decreased at stage " + std::to_string(t));

    CompileStage stage;
    stage.stage = t;
    stage.schedule_index = s_next;
    stage.set_value_before = x_prev;
    stage.set_value_after = x_next;
    DyadicRational rest = delta;
    for (Nat k = 0; k <= t; ++k) {
      // nu_k = floor(rest / 2^-h(k)), exactly.
      Nat hk = h_at(k);
      Int scaled;
      if (hk >= rest.exponent())
        scaled = rest.mantissa() << static_cast<unsigned>(hk - rest.exponent());
      else
        scaled = rest.mantissa() >> static_cast<unsigned>(rest.exponent() - hk);
      if (scaled > 1'000'000)
        throw budget_exceeded("stage " + std::to_string(t) + " needs " + scaled.str() +
                              " jumps at h(" + std::to_string(k) + ")");
      Nat nu = scaled.convert_to<Nat>();
      stage.multiplicities.push_back(nu);
      for (Nat i = 0; i < nu; ++i) emitted.push_back(hk);
      rest -= DyadicRational(Int(nu), 0) * DyadicRational(1, hk);
    }
    stage.balanced = rest.is_zero();
    if (!stage.balanced) {
      result.all_balanced = false;
      result.stages.push_back(std::move(stage));
      throw denomination_error("stage " + std::to_string(t) +
                               " cannot be balanced in denominations 2^-h(0..t)");
    }
    result.stages.push_back(std::move(stage));
    x_prev = x_next;
    s_prev = s_next;
  }

  result.name = Name::from_values(emitted);
  auto h_copy = h;
  result.u_modulus = ModulusCertificate{
      [h_copy](Nat n) -> Int { return Int(h_copy(n + 1)); }, SeriesTarget::u_series,
      "set-compile(" + h_label + ": g(n)=h(n+1))", false};

  // Per-value jump bound on the realized trace:
  // u_f(h(n)) <= sum_{k=h(n-1)}^{h(n)} 2^{h(n)-k}  (= 2^{h(n)-h(n-1)+1} - 1).
  std::map<Nat, Nat> uf;
  for (Nat e : emitted) ++uf[e];
  for (Nat n = 0; n < h_values.size(); ++n) {
    Nat hn = h_values[n];
    auto it = uf.find(hn);
    if (it == uf.end()) continue;
    Nat h_prev_v = n == 0 ? 0 : h_values[n - 1];
    Int bound = (Int(1) << static_cast<unsigned>(hn - h_prev_v + 1)) - 1;
    if (Int(it->second) > bound) result.jump_bound_ok = false;
  }
  return result;
}

ModulusCertificate nearly_computable_upgrade(const ModulusCertificate& r,
                                             const std::function<Int(const Int&)>& s,
                                             const std::string& s_label) {
  if (r.target != SeriesTarget::u_series)
    throw invalid_parameter("nearly_computable_upgrade expects a u-series certificate");
  auto ra = r.at;
  ModulusCertificate out;
  out.target = SeriesTarget::raw;
  out.conditional = r.conditional;
  out.provenance = "escape-composed(" + s_label + " after " + r.provenance + ")";
  out.at = [ra, s](Nat n) -> Int { return s(ra(n)); };
  return out;
}

SplitResult split_name(const Name& f, const std::function<Nat(Nat)>& r,
                       const std::string& r_label, std::size_t prefix_len) {
  f.ensure(prefix_len);
  if (!f.escape() && !f.exhausted())
    throw invalid_parameter("split_name needs an escape bound or a fully realized name");

  // Realized r-values per parity, capped at the prefix length (floors beyond
  // the realized range are vacuous).
  std::vector<Nat> even_marks, odd_marks;
  Nat prev_r = 0;
  for (Nat m = 0;; ++m) {
    Nat value = r(m);
    if (m > 0 && value <= prev_r) throw invalid_parameter("r must be increasing");
    prev_r = value;
    if (value > prefix_len) break;
    (m % 2 == 0 ? even_marks : odd_marks).push_back(value);
    if (m > 2 * prefix_len + 2) break;
  }
  auto floor_of = [](const std::vector<Nat>& marks, std::size_t index) -> Nat {
    Nat best = 0;
    for (Nat mark : marks)
      if (mark <= index) best = std::max(best, mark);
    return best;
  };

  std::vector<Nat> g_values, h_values;
  for (std::size_t k = 0; k < prefix_len; ++k) {
    Nat v = f.at(k);
    bool g_ok = v >= floor_of(even_marks, g_values.size());
    bool h_ok = v >= floor_of(odd_marks, h_values.size());
    if (!g_ok && !h_ok)
      throw split_infeasible("value " + std::to_string(v) + " at index " + std::to_string(k) +
                             " fits neither side for r = " + r_label);
    bool to_g = g_ok && (!h_ok || g_values.size() <= h_values.size());
    (to_g ? g_values : h_values).push_back(v);
  }

  std::optional<EscapeBound> derived_g, derived_h;
  if (f.escape()) {
    EscapeBound base = *f.escape();
    derived_g = EscapeBound{base.at, base.max_level, "split-even(" + base.provenance + ")"};
    derived_h = EscapeBound{base.at, base.max_level, "split-odd(" + base.provenance + ")"};
  }

  SplitResult result;
  result.g = Name::from_values(g_values, derived_g);
  result.h = Name::from_values(h_values, derived_h);
  SplitReport& report = result.report;

  // Conservation on complete windows.
  std::optional<Nat> level = f.certified_level(prefix_len);
  if (f.exhausted() && f.available() <= prefix_len) {
    Nat max_v = 0;
    for (Nat v : f.realized()) max_v = std::max(max_v, v);
    level = max_v;
  }
  report.checked_upto = level;
  if (level) {
    for (Nat n = 0; n <= *level; ++n) {
      Nat cf = 0, cg = 0, ch = 0;
      for (std::size_t k = 0; k < prefix_len; ++k)
        if (f.at(k) == n) ++cf;
      for (Nat v : g_values)
        if (v == n) ++cg;
      for (Nat v : h_values)
        if (v == n) ++ch;
      if (cg + ch != cf) report.conserved = false;
    }
  }

  // Staggered floor conditions on the realized prefixes.
  auto staggered = [](const std::vector<Nat>& values, const std::vector<Nat>& marks) {
    for (Nat mark : marks)
      for (std::size_t k = mark; k < values.size(); ++k)
        if (values[k] < mark) return false;
    return true;
  };
  report.staggered_ok = staggered(g_values, even_marks) && staggered(h_values, odd_marks);

  // Regaining evidence: the realized raw tail from each mark is dominated by
  // the u-series tail over the same value range.
  auto regaining = [](const std::vector<Nat>& values, const std::vector<Nat>& marks) {
    for (Nat mark : marks) {
      DyadicRational raw_tail;
      for (std::size_t k = mark; k < values.size(); ++k)
        raw_tail += DyadicRational(1, values[k]);
      DyadicRational u_tail;
      std::map<Nat, Nat> u;
      for (Nat v : values) ++u[v];
      for (const auto& [v, count] : u)
        if (v >= mark) u_tail += DyadicRational(Int(count), 0) * DyadicRational(1, v);
      if (raw_tail > u_tail) return false;
    }
    return true;
  };
  report.regaining_ok = regaining(g_values, even_marks) && regaining(h_values, odd_marks);
  return result;
}

}  // namespace roc
