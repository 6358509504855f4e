/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/diagonal.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "roc/errors.hpp"

namespace roc {

Nat pair_index(Nat i, Nat j) { return (i + j) * (i + j + 1) / 2 + j; }

std::pair<Nat, Nat> unpair_index(Nat t) {
  // Largest w with w(w+1)/2 <= t, found by integer arithmetic.
  Nat w = 0;
  while ((w + 1) * (w + 2) / 2 <= t) ++w;
  Nat j = t - w * (w + 1) / 2;
  return {w - j, j};
}

OpponentSpec OpponentSpec::divergent() { return OpponentSpec{}; }

OpponentSpec OpponentSpec::echo(Nat delay) {
  if (delay == 0) throw invalid_parameter("echo delay must be >= 1");
  OpponentSpec s;
  s.kind = Kind::echo;
  s.delay = delay;
  return s;
}

OpponentSpec OpponentSpec::table(std::vector<std::array<Nat, 3>> entries) {
  OpponentSpec s;
  s.kind = Kind::table;
  s.entries = std::move(entries);
  return s;
}

OpponentSuite builtin_suite() {
  // Table opponent: a name of 3/4 = 2^-1 + 2^-2, revealed slowly.
  return {OpponentSpec::divergent(), OpponentSpec::echo(3),
          OpponentSpec::table({{0, 1, 6}, {1, 2, 20}})};
}

namespace {

// Jumps published by a run: (exponent, stage) in emission order.  The echo
// opponent reads these; during a run the vector grows, during a check it is
// the full list from the trace.  The delay >= 1 makes both views agree.
struct PublishedJumps {
  std::vector<std::pair<Nat, Nat>> jumps;
};

struct OpponentOracle {
  std::function<std::optional<Nat>(Nat k, Nat budget)> eval;
  bool never_converges = false;
};

OpponentOracle make_oracle(const OpponentSpec& spec,
                           std::shared_ptr<const PublishedJumps> published) {
  switch (spec.kind) {
    case OpponentSpec::Kind::divergent:
      return {[](Nat, Nat) -> std::optional<Nat> { return std::nullopt; }, true};
    case OpponentSpec::Kind::echo: {
      Nat delay = spec.delay;
      return {[published, delay](Nat k, Nat budget) -> std::optional<Nat> {
                if (k >= published->jumps.size()) return std::nullopt;
                auto [exponent, stage] = published->jumps[k];
                if (stage + delay > budget) return std::nullopt;
                return exponent;
              },
              false};
    }
    case OpponentSpec::Kind::table: {
      auto entries = spec.entries;
      return {[entries](Nat k, Nat budget) -> std::optional<Nat> {
                for (const auto& e : entries)
                  if (e[0] == k && e[2] <= budget) return e[1];
                return std::nullopt;
              },
              false};
    }
  }
  throw invalid_parameter("unknown opponent kind");
}

// Incrementally maintained W_e[t] and its dyadic sum.
struct OpponentState {
  Nat next_k = 0;
  std::vector<Nat> pending;
  DyadicRational sum;

  void advance(const OpponentOracle& oracle, Nat budget) {
    if (oracle.never_converges) return;
    while (next_k <= budget) pending.push_back(next_k++);
    std::vector<Nat> still;
    still.reserve(pending.size());
    for (Nat k : pending) {
      std::optional<Nat> v = oracle.eval(k, budget);
      if (v)
        sum += DyadicRational(1, *v);
      else
        still.push_back(k);
    }
    pending.swap(still);
  }
};

Nat to_index(const Int& v, const char* what) {
  if (v < 0 || v > Int(Nat(1) << 62)) throw budget_exceeded(std::string(what) + " out of desk scale");
  return v.convert_to<Nat>();
}

}  // namespace

Schedule::Schedule(SeriesFn r_hat, ModulusCertificate cert)
    : r_hat_(std::move(r_hat)), cert_(std::move(cert)) {
  if (cert_.target != SeriesTarget::u_series)
    throw invalid_parameter("schedule needs a coefficient-series certificate");
}

Int Schedule::rhat_at(Nat k) {
  while (rhat_memo_.size() <= k) {
    Int next = r_hat_(rhat_memo_.size());
    if (next > 0 && boost::multiprecision::msb(next) > (1u << 14))
      throw budget_exceeded("weighted budget values exceed desk scale at index " +
                            std::to_string(rhat_memo_.size()));
    rhat_memo_.push_back(std::move(next));
  }
  return rhat_memo_[k];
}

DyadicRational Schedule::tail_upper_bound(Nat m, Nat precision) {
  return bound_with_anchor(m, precision, anchor_for(precision));
}

Nat Schedule::anchor_for(Nat precision) {
  Nat anchor = to_index(cert_.at(precision), "schedule anchor");
  if (anchor > (Nat(1) << 22))
    throw budget_exceeded("schedule anchor " + std::to_string(anchor) +
                          " is out of desk scale; use a slower-growing budget function");
  return anchor;
}

DyadicRational Schedule::bound_with_anchor(Nat m, Nat precision, Nat anchor) {
  DyadicRational far(1, precision);  // tail past the anchor
  if (m >= anchor) return far;
  Nat window_end = std::min(m + 48, anchor);
  DyadicRational literal;
  for (Nat k = m; k < window_end; ++k)
    literal += DyadicRational(rhat_at(k), 0) * DyadicRational(1, k);
  DyadicRational pad;
  if (window_end < anchor) {
    // r_hat is non-decreasing, so every term on [window_end, anchor) is at
    // most r_hat(anchor) 2^-k.
    pad = DyadicRational(rhat_at(anchor), 0) * geometric_tail(window_end);
  }
  return literal + pad + far;
}

void Schedule::extend() {
  if (values_.empty()) {
    for (Nat m = 0; m <= (Nat(1) << 20); ++m) {
      if (rhat_at(m) > 0) {
        values_.push_back(m);
        return;
      }
    }
    throw budget_exceeded("no positive value of the staged budget function found");
  }
  Nat prev = values_.back();
  DyadicRational threshold(1, prev + 1);  // (1/2) * 2^-prev
  Nat precision = prev + 3;
  Nat anchor = anchor_for(precision);
  // Success is guaranteed by m = anchor + 1, where the bound collapses to
  // 2^-(prev+3); the candidate budget keeps fast-growing weights (whose
  // schedule values explode geometrically) from spinning at desk scale.
  Nat cap = std::min(anchor + 1, prev + (Nat(1) << 15));
  for (Nat m = prev + 1; m <= cap; ++m) {
    if (bound_with_anchor(m, precision, anchor) <= threshold) {
      values_.push_back(m);
      return;
    }
  }
  throw budget_exceeded("schedule index " + std::to_string(values_.size()) +
                        " not certifiable within the candidate budget");
}

Nat Schedule::at(Nat n) {
  while (values_.size() <= n) extend();
  return values_[n];
}

DiagSetup make_diag_setup(const RhoSpec& spec) {
  RhoGenerator gen = rho_generator(spec);
  DiagSetup setup;
  setup.r = gen.r;
  auto cumulative = std::make_shared<std::vector<Int>>();
  SeriesFn r = gen.r;
  setup.r_hat = [cumulative, r](Nat n) -> Int {
    while (cumulative->size() <= n) {
      std::size_t k = cumulative->size();
      Int prev = k == 0 ? Int(0) : cumulative->back();
      cumulative->push_back(prev + r(k));
    }
    return (*cumulative)[static_cast<std::size_t>(n)];
  };

  ModulusCertificate cert_r = strictly_increasing(gen.cert);
  // Series bound: total <= head before the certified index for level 0,
  // plus a unit tail.
  Nat head_end = to_index(cert_r.at(0), "series bound index");
  DyadicRational total(1, 0);  // the 2^-0 tail bound
  for (Nat k = 0; k < head_end; ++k)
    total += DyadicRational(gen.r(k), 0) * DyadicRational(1, k);
  Nat d = 0;
  while (DyadicRational::power_of_two(static_cast<std::int64_t>(d)) < total) ++d;
  setup.r_hat_cert = prefix_sum_modulus(cert_r, d, 0);
  return setup;
}

namespace {

struct RequirementState {
  Nat w = 0;
  Int c;
};

// Shared stage engine: advances the construction one transition at a time.
// run_diagonalization records what it does; check_trace compares the same
// recomputation against a foreign trace.
struct Engine {
  Schedule schedule;
  SeriesFn r_hat;
  std::shared_ptr<PublishedJumps> published;
  std::vector<OpponentOracle> oracles;
  std::vector<OpponentState> opp_states;
  std::map<Nat, RequirementState> requirements;
  DyadicRational x;

  Engine(const OpponentSuite& suite, const DiagSetup& setup,
         std::shared_ptr<PublishedJumps> jumps)
      : schedule(setup.r_hat, setup.r_hat_cert), r_hat(setup.r_hat), published(std::move(jumps)) {
    for (const auto& spec : suite) {
      oracles.push_back(make_oracle(spec, published));
      opp_states.emplace_back();
    }
  }

  RequirementState& requirement(Nat e) {
    auto it = requirements.find(e);
    if (it != requirements.end()) return it->second;
    RequirementState st;
    st.w = 0;
    st.c = r_hat(schedule.at(pair_index(e, 0))) - 1;
    return requirements.emplace(e, std::move(st)).first->second;
  }

  StageRecord step(Nat t) {
    auto [i, j] = unpair_index(t);
    DyadicRational sum;
    if (i < opp_states.size()) {
      opp_states[i].advance(oracles[i], t);
      sum = opp_states[i].sum;
    }
    RequirementState& st = requirement(i);
    Nat s_iw = schedule.at(pair_index(i, st.w));
    DyadicRational band(1, s_iw + 3);  // (1/8) * 2^-s
    DyadicRational diff = x - sum;
    bool attention = diff.abs() <= band;

    StageRecord rec;
    rec.t = t;
    rec.i = i;
    rec.j = j;
    rec.attention = attention;
    rec.x_before = x;
    rec.opponent_sum = sum;
    rec.w_before = st.w;
    rec.c_before = st.c;
    if (attention) {
      rec.jump = s_iw;
      x += DyadicRational(1, s_iw);
      published->jumps.emplace_back(s_iw, t);
      if (st.c == 0) {
        st.w += 1;
        st.c = r_hat(schedule.at(pair_index(i, st.w))) - 1;
      } else {
        st.c -= 1;
      }
    }
    rec.w_after = st.w;
    rec.c_after = st.c;
    return rec;
  }
};

}  // namespace

DiagResult run_diagonalization(const OpponentSuite& suite, const RhoSpec& spec, Nat stages) {
  if (stages == 0) throw invalid_parameter("need at least one stage");
  auto published = std::make_shared<PublishedJumps>();
  Engine engine(suite, make_diag_setup(spec), published);
  DiagResult result;
  result.trace.stages = stages;
  result.trace.rho_label = spec.label;
  result.trace.suite = suite;
  result.trace.records.reserve(stages);
  for (Nat t = 0; t < stages; ++t) result.trace.records.push_back(engine.step(t));
  result.trace.x_final = engine.x;
  std::vector<Nat> jumps;
  for (const auto& [exponent, stage] : published->jumps) jumps.push_back(exponent);
  result.name = Name::from_values(jumps);
  return result;
}

Name extract_name(const StageTrace& trace) {
  std::vector<Nat> jumps;
  for (const auto& rec : trace.records)
    if (rec.jump) jumps.push_back(*rec.jump);
  return Name::from_values(jumps);
}

TraceCheckReport check_trace(const StageTrace& trace, const OpponentSuite& suite,
                             const RhoSpec& spec) {
  TraceCheckReport report;
  auto flag = [&report](Nat stage, std::string kind, std::string detail) {
    report.violations.push_back({stage, std::move(kind), std::move(detail)});
  };

  // The echo opponents replay the trace's own jump list.
  auto published = std::make_shared<PublishedJumps>();
  for (const auto& rec : trace.records)
    if (rec.jump) published->jumps.emplace_back(*rec.jump, rec.t);
  Engine engine(suite, make_diag_setup(spec), published);

  // Sequential recomputation of every transition.
  struct Attention {
    Nat t;
    Nat w;
    Nat s_value;
    DyadicRational opp_sum;
  };
  std::map<Nat, std::vector<Attention>> attentions;
  std::map<Nat, std::map<Nat, Nat>> block_jumps;  // i -> w -> count
  std::map<Nat, Nat> jump_counts;                 // exponent -> count
  DyadicRational x_prev;
  bool x_monotone = true;

  for (std::size_t idx = 0; idx < trace.records.size(); ++idx) {
    const StageRecord& rec = trace.records[idx];
    Nat t = rec.t;
    auto [i, j] = unpair_index(t);
    if (rec.i != i || rec.j != j)
      flag(t, "pairing", "record pair does not match the stage code");

    // Recompute with the engine (which tracks its own state).
    DyadicRational sum;
    if (i < engine.opp_states.size()) {
      engine.opp_states[i].advance(engine.oracles[i], t);
      sum = engine.opp_states[i].sum;
    }
    RequirementState& st = engine.requirement(i);
    Nat s_iw = engine.schedule.at(pair_index(i, st.w));
    DyadicRational band(1, s_iw + 3);
    bool attention = (engine.x - sum).abs() <= band;

    if (rec.x_before != engine.x)
      flag(t, "x-mismatch", "expected x " + engine.x.to_string() + ", recorded " +
                                rec.x_before.to_string());
    if (rec.opponent_sum != sum)
      flag(t, "opponent-sum", "expected " + sum.to_string() + ", recorded " +
                                  rec.opponent_sum.to_string());
    if (rec.attention != attention)
      flag(t, "attention-mismatch", attention ? "condition holds but no attention recorded"
                                              : "attention recorded but condition fails");
    if (rec.w_before != st.w)
      flag(t, "witness-rule", "witness block does not match replay");
    if (rec.c_before != st.c) flag(t, "counter-rule", "countdown does not match replay");

    if (attention) {
      if (!rec.jump || *rec.jump != s_iw)
        flag(t, "jump-mismatch", "expected jump exponent " + std::to_string(s_iw));
      attentions[i].push_back({t, st.w, s_iw, sum});
      block_jumps[i][st.w] += 1;
      ++jump_counts[s_iw];
      engine.x += DyadicRational(1, s_iw);
      if (st.c == 0) {
        st.w += 1;
        st.c = engine.r_hat(engine.schedule.at(pair_index(i, st.w))) - 1;
      } else {
        st.c -= 1;
      }
    } else if (rec.jump) {
      flag(t, "jump-mismatch", "jump recorded without attention");
    }
    if (rec.w_after != st.w) flag(t, "witness-rule", "post-stage witness block mismatch");
    if (rec.c_after != st.c) flag(t, "counter-rule", "post-stage countdown mismatch");

    if (rec.x_before < x_prev) x_monotone = false;
    x_prev = rec.x_before;
  }
  if (!x_monotone) flag(0, "x-monotone", "x decreased along the trace");
  if (trace.x_final != engine.x)
    flag(trace.stages, "x-mismatch", "final x does not match replay");

  // Attention-gap bounds for consecutive attentions of each requirement.
  for (const auto& [i, list] : attentions) {
    report.attention_counts[i] = list.size();
    for (std::size_t a = 0; a + 1 < list.size(); ++a) {
      const Attention& first = list[a];
      const Attention& second = list[a + 1];
      DyadicRational gap = second.opp_sum - first.opp_sum;
      DyadicRational lower(3, first.s_value + 2);  // (3/4) * 2^-s
      ++report.lower_bound_pairs_checked;
      if (gap < lower)
        flag(second.t, "attention-lower-bound",
             "opponent gained " + gap.to_string() + " < " + lower.to_string());

      // Side condition: every attention strictly between must sit at a
      // later pair code.
      bool side = true;
      Nat code = pair_index(i, first.w);
      for (const auto& [e, other] : attentions) {
        for (const Attention& mid : other) {
          if (mid.t <= first.t || mid.t >= second.t) continue;
          if (pair_index(e, mid.w) <= code) side = false;
        }
      }
      if (side) {
        DyadicRational upper(7, first.s_value + 2);  // (7/4) * 2^-s
        ++report.upper_bound_pairs_checked;
        if (gap > upper)
          flag(second.t, "attention-upper-bound",
               "opponent gained " + gap.to_string() + " > " + upper.to_string());
      }
    }
  }

  // Completed blocks: exactly r_hat(s(<i,j>)) jumps at that exponent.
  for (const auto& [i, blocks] : block_jumps) {
    Nat final_w = engine.requirement(i).w;
    for (const auto& [w, count] : blocks) {
      if (w >= final_w) continue;  // block still open at the horizon
      Int expect = engine.r_hat(engine.schedule.at(pair_index(i, w)));
      ++report.completed_blocks_checked;
      if (Int(count) != expect)
        flag(trace.stages, "block-completion",
             "requirement " + std::to_string(i) + " block " + std::to_string(w) + " made " +
                 std::to_string(count) + " jumps, expected " + expect.str());
    }
  }

  // Per-exponent jump budget and the exact total bound.
  DyadicRational budget_total;
  for (const auto& [exponent, count] : jump_counts) {
    Int cap = engine.r_hat(exponent);
    if (Int(count) > cap)
      flag(trace.stages, "jump-budget",
           "exponent " + std::to_string(exponent) + " used " + std::to_string(count) +
               " > budget " + cap.str());
    budget_total += DyadicRational(cap, 0) * DyadicRational(1, exponent);
  }
  if (trace.x_final > budget_total && !jump_counts.empty())
    flag(trace.stages, "total-bound", "sum of jumps exceeds the weighted budget");
  return report;
}

void write_trace_jsonl(std::ostream& out, const StageTrace& trace) {
  nlohmann::json header;
  header["type"] = "header";
  header["stages"] = trace.stages;
  header["rho"] = trace.rho_label;
  nlohmann::json suite = nlohmann::json::array();
  for (const auto& spec : trace.suite) {
    nlohmann::json o;
    switch (spec.kind) {
      case OpponentSpec::Kind::divergent: o["kind"] = "divergent"; break;
      case OpponentSpec::Kind::echo:
        o["kind"] = "echo";
        o["delay"] = spec.delay;
        break;
      case OpponentSpec::Kind::table: {
        o["kind"] = "table";
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : spec.entries) entries.push_back({e[0], e[1], e[2]});
        o["entries"] = entries;
        break;
      }
    }
    suite.push_back(o);
  }
  header["suite"] = suite;
  out << header.dump() << "\n";

  for (const auto& rec : trace.records) {
    nlohmann::json r;
    r["type"] = "stage";
    r["t"] = rec.t;
    r["i"] = rec.i;
    r["j"] = rec.j;
    r["attention"] = rec.attention;
    r["x"] = rec.x_before.to_string();
    r["opp"] = rec.opponent_sum.to_string();
    if (rec.jump)
      r["jump"] = *rec.jump;
    else
      r["jump"] = nullptr;
    r["w0"] = rec.w_before;
    r["w1"] = rec.w_after;
    r["c0"] = rec.c_before.str();
    r["c1"] = rec.c_after.str();
    out << r.dump() << "\n";
  }

  nlohmann::json summary;
  summary["type"] = "summary";
  summary["x_final"] = trace.x_final.to_string();
  Nat jumps = 0;
  for (const auto& rec : trace.records)
    if (rec.jump) ++jumps;
  summary["jumps"] = jumps;
  out << summary.dump() << "\n";
}

StageTrace read_trace_jsonl(std::istream& in) {
  StageTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json r = nlohmann::json::parse(line, nullptr, false);
    if (r.is_discarded()) throw io_error("malformed trace line: " + line.substr(0, 80));
    std::string type = r.value("type", "");
    if (type == "header") {
      have_header = true;
      trace.stages = r.at("stages").get<Nat>();
      trace.rho_label = r.at("rho").get<std::string>();
      for (const auto& o : r.at("suite")) {
        std::string kind = o.at("kind").get<std::string>();
        if (kind == "divergent") {
          trace.suite.push_back(OpponentSpec::divergent());
        } else if (kind == "echo") {
          trace.suite.push_back(OpponentSpec::echo(o.at("delay").get<Nat>()));
        } else if (kind == "table") {
          std::vector<std::array<Nat, 3>> entries;
          for (const auto& e : o.at("entries"))
            entries.push_back({e.at(0).get<Nat>(), e.at(1).get<Nat>(), e.at(2).get<Nat>()});
          trace.suite.push_back(OpponentSpec::table(std::move(entries)));
        } else {
          throw io_error("unknown opponent kind: " + kind);
        }
      }
    } else if (type == "stage") {
      StageRecord rec;
      rec.t = r.at("t").get<Nat>();
      rec.i = r.at("i").get<Nat>();
      rec.j = r.at("j").get<Nat>();
      rec.attention = r.at("attention").get<bool>();
      rec.x_before = DyadicRational::parse(r.at("x").get<std::string>());
      rec.opponent_sum = DyadicRational::parse(r.at("opp").get<std::string>());
      if (!r.at("jump").is_null()) rec.jump = r.at("jump").get<Nat>();
      rec.w_before = r.at("w0").get<Nat>();
      rec.w_after = r.at("w1").get<Nat>();
      rec.c_before = Int(r.at("c0").get<std::string>());
      rec.c_after = Int(r.at("c1").get<std::string>());
      trace.records.push_back(std::move(rec));
    } else if (type == "summary") {
      trace.x_final = DyadicRational::parse(r.at("x_final").get<std::string>());
    } else {
      throw io_error("unknown trace record type: " + type);
    }
  }
  if (!have_header) throw io_error("trace has no header record");
  return trace;
}

RhoSpec rho_spec_from_label(const std::string& label) {
  if (label == "one") return RhoSpec::one();
  if (label == "two") return RhoSpec::two();
  if (label.rfind("seq:", 0) == 0) {
    std::string body = label.substr(4);
    auto slash = body.find('/');
    Int num(slash == std::string::npos ? body : body.substr(0, slash));
    Int den(slash == std::string::npos ? std::string("1") : body.substr(slash + 1));
    if (den <= 0) throw invalid_parameter("rho denominator must be positive");
    return RhoSpec::seq_const(Rat(num, den));
  }
  throw invalid_parameter("unknown rho label: " + label);
}

}  // namespace roc
