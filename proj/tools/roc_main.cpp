/* SPDX-License-Identifier: Apache-2.0 */

// roc: exact dyadic-series names, their profiles, certificates and staged
// constructions, as JSON-lines records over exact "m/2^e" values.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "roc/combinators.hpp"
#include "roc/diagonal.hpp"
#include "roc/errors.hpp"
#include "roc/namespec.hpp"
#include "roc/profile.hpp"
#include "roc/sigma.hpp"
#include "roc/transfer.hpp"

using json = nlohmann::json;
using namespace roc;

namespace {

Nat grid_exp_default() {
  if (const char* env = std::getenv("ROC_GRID_EXP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 62) return static_cast<Nat>(v);
  }
  return 10;
}

void emit(const json& record) { std::cout << record.dump() << "\n"; }

json enclosure_json(const RootEnclosure& e) {
  return json{{"lo", e.lo.to_string()}, {"hi", e.hi.to_string()}};
}

std::vector<std::size_t> parse_perm(const std::string& csv, std::size_t len) {
  std::vector<std::size_t> sigma;
  if (csv.empty()) {
    for (std::size_t k = 0; k < len; ++k) sigma.push_back(k);
    return sigma;
  }
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string item = csv.substr(pos, comma == std::string::npos ? csv.size() - pos
                                                                  : comma - pos);
    if (item.empty()) throw invalid_parameter("empty permutation entry");
    sigma.push_back(std::stoull(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return sigma;
}

SetApproximation set_from_arg(const std::string& arg) {
  if (arg == "evens") return evens_set();
  if (arg.rfind("file:", 0) == 0) {
    std::string path = arg.substr(5);
    std::ifstream in(path);
    if (!in) throw io_error("cannot read set file: " + path);
    std::vector<std::vector<Nat>> increments;
    std::string line;
    while (std::getline(in, line)) {
      std::vector<Nat> inc;
      std::size_t pos = 0;
      while (pos < line.size()) {
        while (pos < line.size() && line[pos] == ' ') ++pos;
        std::size_t begin = pos;
        while (pos < line.size() && line[pos] != ' ') ++pos;
        if (pos > begin) inc.push_back(std::stoull(line.substr(begin, pos - begin)));
      }
      increments.push_back(std::move(inc));
    }
    return cumulative_set(std::move(increments), path);
  }
  throw invalid_parameter("unknown set source: " + arg + " (use evens or file:PATH)");
}

RationalApproximation approx_from_arg(const std::string& arg) {
  if (arg == "third") return third_truncations();
  if (arg.rfind("file:", 0) == 0) {
    std::string path = arg.substr(5);
    std::ifstream in(path);
    if (!in) throw io_error("cannot read approximation file: " + path);
    auto values = std::make_shared<std::vector<DyadicRational>>();
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) values->push_back(DyadicRational::parse(line));
    return RationalApproximation{
        [values, path](Nat n) -> DyadicRational {
          if (n >= values->size())
            throw insufficient_data("approximation file " + path + " has only " +
                                    std::to_string(values->size()) + " terms");
          return (*values)[n];
        },
        path};
  }
  throw invalid_parameter("unknown approximation source: " + arg);
}

OpponentSuite suite_from_arg(const std::string& arg) {
  if (arg == "none") return {};
  if (arg == "suite") return builtin_suite();
  throw invalid_parameter("unknown opponent suite: " + arg + " (use none or suite)");
}

int run(int argc, char** argv) {
  CLI::App app{"exact dyadic-series name toolbox"};
  app.require_subcommand(1);
  app.fallthrough();
  Nat grid_exp = grid_exp_default();
  app.add_option("--grid-exp", grid_exp, "root enclosure grid width exponent");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "partial sum of a name's series");
  std::string eval_name;
  std::size_t eval_n = 0;
  eval_cmd->add_option("--name", eval_name)->required();
  eval_cmd->add_option("--n", eval_n)->required();

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "multiplicity profile over a prefix");
  std::string profile_name;
  Nat profile_nmax = 8;
  std::size_t profile_len = 64;
  profile_cmd->add_option("--name", profile_name)->required();
  profile_cmd->add_option("--n-max", profile_nmax);
  profile_cmd->add_option("--prefix-len", profile_len);

  // reorder
  auto* reorder_cmd = app.add_subcommand("reorder", "sorted rearrangement; permutation recovery");
  std::string reorder_name, reorder_against;
  std::size_t reorder_len = 32;
  Nat reorder_window = 8;
  reorder_cmd->add_option("--name", reorder_name)->required();
  reorder_cmd->add_option("--prefix-len", reorder_len);
  reorder_cmd->add_option("--against", reorder_against);
  reorder_cmd->add_option("--window", reorder_window);

  // tails
  auto* tails_cmd = app.add_subcommand("tails", "sorted vs rearranged tail comparison");
  std::string tails_name, tails_perm;
  std::size_t tails_len = 8, tails_n = 0;
  tails_cmd->add_option("--name", tails_name)->required();
  tails_cmd->add_option("--len", tails_len);
  tails_cmd->add_option("--n", tails_n);
  tails_cmd->add_option("--perm", tails_perm, "comma-separated permutation of [0,len)");

  // combine
  auto* combine_cmd = app.add_subcommand("combine", "sum/product names with profile identity");
  std::string combine_mode = "sum", combine_f, combine_g;
  std::size_t combine_n = 16;
  Nat combine_window = 8;
  combine_cmd->add_option("--mode", combine_mode)->check(CLI::IsMember({"sum", "product"}));
  combine_cmd->add_option("--f", combine_f)->required();
  combine_cmd->add_option("--g", combine_g)->required();
  combine_cmd->add_option("--n", combine_n);
  combine_cmd->add_option("--window", combine_window);

  // solovay
  auto* solovay_cmd = app.add_subcommand("solovay", "greedy name transfer along an approximation");
  std::string solovay_x = "third", solovay_g;
  Nat solovay_c = 0, solovay_stages = 12;
  solovay_cmd->add_option("--x", solovay_x);
  solovay_cmd->add_option("--g", solovay_g)->required();
  solovay_cmd->add_option("--c", solovay_c);
  solovay_cmd->add_option("--stages", solovay_stages);

  // compile-set
  auto* compile_cmd = app.add_subcommand("compile-set", "set approximation to reordered name");
  std::string compile_set = "evens", compile_h = "affine(2,2)";
  Nat compile_budget = 64;
  compile_cmd->add_option("--set", compile_set);
  compile_cmd->add_option("--hfn", compile_h);
  compile_cmd->add_option("--stage-budget", compile_budget);

  // split
  auto* split_cmd = app.add_subcommand("split", "split a witnessed name into two parts");
  std::string split_name_arg, split_r = "affine(4,4)";
  std::size_t split_len = 64;
  split_cmd->add_option("--name", split_name_arg)->required();
  split_cmd->add_option("--r", split_r);
  split_cmd->add_option("--prefix-len", split_len);

  // sigma
  auto* sigma_cmd = app.add_subcommand("sigma", "window estimate of profile root growth");
  std::string sigma_name, sigma_against, sigma_mode = "sum";
  Nat sigma_window = 8;
  sigma_cmd->add_option("--name", sigma_name)->required();
  sigma_cmd->add_option("--window", sigma_window);
  sigma_cmd->add_option("--against", sigma_against);
  sigma_cmd->add_option("--mode", sigma_mode)->check(CLI::IsMember({"sum", "product"}));

  // diag
  auto* diag_cmd = app.add_subcommand("diag", "staged diagonalization run");
  std::string diag_opponents = "suite", diag_rho = "one", diag_out;
  Nat diag_stages = 100;
  diag_cmd->add_option("--opponents", diag_opponents);
  diag_cmd->add_option("--rho", diag_rho);
  diag_cmd->add_option("--stages", diag_stages);
  diag_cmd->add_option("--out", diag_out, "trace file (default: stdout)");

  // check-trace
  auto* check_cmd = app.add_subcommand("check-trace", "replay and verify a trace");
  std::string check_path;
  check_cmd->add_option("trace", check_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  if (*eval_cmd) {
    auto spec = parse_name_spec(eval_name);
    Name f = instantiate(spec);
    emit({{"cmd", "eval"},
          {"name", to_string(spec)},
          {"n", eval_n},
          {"sum", partial_sum(f, eval_n).to_string()}});
  } else if (*profile_cmd) {
    auto spec = parse_name_spec(profile_name);
    Name f = instantiate(spec);
    f.try_ensure(profile_len);
    if (f.exhausted() && f.available() < profile_len) profile_len = f.available();
    UProfile p = u_profile(f, profile_nmax, profile_len);
    json counts = json::array(), complete = json::array();
    for (Nat n = 0; n <= profile_nmax; ++n) {
      counts.push_back(p.count(n));
      complete.push_back(p.is_complete(n));
    }
    emit({{"cmd", "profile"},
          {"name", to_string(spec)},
          {"prefix_len", profile_len},
          {"n_max", profile_nmax},
          {"counts", counts},
          {"complete", complete}});
  } else if (*reorder_cmd) {
    auto spec = parse_name_spec(reorder_name);
    Name f = instantiate(spec);
    f.try_ensure(reorder_len);
    if (f.exhausted() && f.available() < reorder_len) reorder_len = f.available();
    Name sorted = star(f, reorder_len);
    json record{{"cmd", "reorder"},
                {"name", to_string(spec)},
                {"prefix_len", reorder_len},
                {"sorted", sorted.realized()}};
    if (auto level = f.certified_level(reorder_len))
      record["true_sorted_upto_level"] = *level;
    else
      record["true_sorted_upto_level"] = nullptr;
    if (!reorder_against.empty()) {
      Name g = instantiate(parse_name_spec(reorder_against));
      Permutation sigma = find_permutation(f, g, reorder_window);
      json pairs = json::array();
      bool recomposes = true;
      for (auto [gi, fi] : sigma.pairs) {
        pairs.push_back({gi, fi});
        if (f.at(fi) != g.at(gi)) recomposes = false;
      }
      record["permutation"] = pairs;
      record["recomposes"] = recomposes;
    }
    emit(record);
  } else if (*tails_cmd) {
    auto spec = parse_name_spec(tails_name);
    Name f = instantiate(spec);
    auto sigma = parse_perm(tails_perm, tails_len);
    auto [sorted_tail, permuted_tail] = compare_tails(f, sigma, tails_n, tails_len);
    emit({{"cmd", "tails"},
          {"name", to_string(spec)},
          {"len", tails_len},
          {"n", tails_n},
          {"sorted_tail", sorted_tail.to_string()},
          {"permuted_tail", permuted_tail.to_string()},
          {"sorted_le_permuted", sorted_tail <= permuted_tail}});
  } else if (*combine_cmd) {
    auto fspec = parse_name_spec(combine_f);
    auto gspec = parse_name_spec(combine_g);
    Name f = instantiate(fspec);
    Name g = instantiate(gspec);
    Name h = combine_mode == "sum" ? sum_name(f, g) : product_name(f, g);
    h.ensure(combine_n);
    std::vector<Nat> prefix(h.realized().begin(), h.realized().begin() + combine_n);
    json record{{"cmd", "combine"},
                {"mode", combine_mode},
                {"f", to_string(fspec)},
                {"g", to_string(gspec)},
                {"prefix", prefix}};
    if (h.escape() && h.escape()->covers(combine_window)) {
      std::size_t need = h.escape()->at(combine_window);
      UProfile uh = u_profile(h, combine_window, std::max<std::size_t>(need, combine_n));
      std::size_t need_f = f.escape()->at(combine_window);
      std::size_t need_g = g.escape()->at(combine_window);
      UProfile uf = u_profile(f, combine_window, need_f);
      UProfile ug = u_profile(g, combine_window, need_g);
      bool identity = true;
      for (Nat n = 0; n <= combine_window; ++n) {
        Nat expect = 0;
        if (combine_mode == "sum") {
          expect = uf.count(n) + ug.count(n);
        } else {
          for (Nat k = 0; k <= n; ++k) expect += uf.count(k) * ug.count(n - k);
        }
        if (uh.count(n) != expect) identity = false;
      }
      record["profile_identity_window"] = combine_window;
      record["profile_identity_ok"] = identity;
    }
    emit(record);
  } else if (*solovay_cmd) {
    auto x = approx_from_arg(solovay_x);
    auto gspec = parse_name_spec(solovay_g);
    Name g = instantiate(gspec);
    auto result = solovay_transfer(x, g, solovay_c, solovay_stages);
    for (const auto& stage : result.report.stages) {
      emit({{"cmd", "solovay"},
            {"record", "stage"},
            {"stage", stage.stage},
            {"target", stage.target.to_string()},
            {"emitted", stage.emitted},
            {"landed", stage.landed.to_string()},
            {"in_interval", stage.in_interval}});
    }
    json summary{{"cmd", "solovay"},
                 {"record", "summary"},
                 {"x", x.label},
                 {"g", to_string(gspec)},
                 {"c", solovay_c},
                 {"name", result.name.realized()},
                 {"hypothesis_ok", result.report.hypothesis_ok},
                 {"all_landed", result.report.all_landed},
                 {"profile_bound_ok", result.report.profile_bound_ok},
                 {"profile_checked_levels", result.report.profile_checked_levels}};
    if (result.report.violated_step)
      summary["violated_step"] = *result.report.violated_step;
    emit(summary);
    if (!result.report.hypothesis_ok) return 1;
  } else if (*compile_cmd) {
    auto set = set_from_arg(compile_set);
    FuncSpec h = parse_func_spec(compile_h);
    auto result = set_to_reordered_name(set, h, h.to_string(), compile_budget);
    for (const auto& stage : result.stages) {
      emit({{"cmd", "compile-set"},
            {"record", "stage"},
            {"stage", stage.stage},
            {"schedule_index", stage.schedule_index},
            {"value_before", stage.set_value_before.to_string()},
            {"value_after", stage.set_value_after.to_string()},
            {"multiplicities", stage.multiplicities},
            {"balanced", stage.balanced}});
    }
    json modulus = json::array();
    for (Nat n = 0; n <= 8; ++n) modulus.push_back(result.u_modulus.at(n).str());
    emit({{"cmd", "compile-set"},
          {"record", "summary"},
          {"set", compile_set},
          {"h", h.to_string()},
          {"name", result.name.realized()},
          {"all_balanced", result.all_balanced},
          {"jump_bound_ok", result.jump_bound_ok},
          {"stalled", result.stalled},
          {"u_modulus", modulus}});
  } else if (*split_cmd) {
    auto spec = parse_name_spec(split_name_arg);
    Name f = instantiate(spec);
    FuncSpec r = parse_func_spec(split_r);
    auto result = split_name(f, r, r.to_string(), split_len);
    json record{{"cmd", "split"},
                {"name", to_string(spec)},
                {"r", r.to_string()},
                {"prefix_len", split_len},
                {"g", result.g.realized()},
                {"h", result.h.realized()},
                {"conserved", result.report.conserved},
                {"staggered_ok", result.report.staggered_ok},
                {"regaining_ok", result.report.regaining_ok}};
    if (result.report.checked_upto)
      record["checked_upto"] = *result.report.checked_upto;
    else
      record["checked_upto"] = nullptr;
    emit(record);
  } else if (*sigma_cmd) {
    auto spec = parse_name_spec(sigma_name);
    Name f = instantiate(spec);
    if (sigma_against.empty()) {
      std::size_t len = f.available();
      if (f.escape() && f.escape()->covers(sigma_window)) {
        Nat need = 0;
        for (Nat n = 0; n <= sigma_window; ++n)
          need = std::max(need, f.escape()->at(n));
        len = std::max<std::size_t>(len, need);
      }
      f.try_ensure(len);
      if (f.exhausted()) len = f.available();
      UProfile p = u_profile(f, sigma_window, len);
      auto est = sigma_estimate(p, grid_exp);
      emit({{"cmd", "sigma"},
            {"name", to_string(spec)},
            {"window", sigma_window},
            {"window_estimate", enclosure_json(est.window_max)},
            {"argmax", est.argmax},
            {"below_one", est.below_one}});
    } else {
      Name g = instantiate(parse_name_spec(sigma_against));
      CombineMode mode = sigma_mode == "sum" ? CombineMode::sum : CombineMode::product;
      auto report = sigma_preservation_check(f, g, mode, sigma_window, grid_exp);
      emit({{"cmd", "sigma"},
            {"name", to_string(spec)},
            {"against", sigma_against},
            {"mode", sigma_mode},
            {"window", sigma_window},
            {"profile_identity_ok", report.profile_identity_ok},
            {"bound_ok", report.bound_ok},
            {"f_estimate", enclosure_json(report.f_estimate.window_max)},
            {"g_estimate", enclosure_json(report.g_estimate.window_max)},
            {"combined_estimate", enclosure_json(report.combined_estimate.window_max)}});
    }
  } else if (*diag_cmd) {
    auto suite = suite_from_arg(diag_opponents);
    auto spec = rho_spec_from_label(diag_rho);
    auto result = run_diagonalization(suite, spec, diag_stages);
    if (diag_out.empty() || diag_out == "-") {
      write_trace_jsonl(std::cout, result.trace);
    } else {
      std::ofstream out(diag_out);
      if (!out) throw io_error("cannot write trace file: " + diag_out);
      write_trace_jsonl(out, result.trace);
      Nat jumps = result.name.available();
      emit({{"cmd", "diag"},
            {"out", diag_out},
            {"stages", diag_stages},
            {"jumps", jumps},
            {"x_final", result.trace.x_final.to_string()}});
    }
  } else if (*check_cmd) {
    std::ifstream in(check_path);
    if (!in) throw io_error("cannot read trace file: " + check_path);
    StageTrace trace = read_trace_jsonl(in);
    auto report = check_trace(trace, trace.suite, rho_spec_from_label(trace.rho_label));
    for (const auto& v : report.violations)
      emit({{"cmd", "check-trace"},
            {"record", "violation"},
            {"stage", v.stage},
            {"kind", v.kind},
            {"detail", v.detail}});
    json attention = json::object();
    for (const auto& [i, count] : report.attention_counts)
      attention[std::to_string(i)] = count;
    emit({{"cmd", "check-trace"},
          {"record", "summary"},
          {"trace", check_path},
          {"violations", report.violations.size()},
          {"attention_counts", attention},
          {"lower_bound_pairs", report.lower_bound_pairs_checked},
          {"upper_bound_pairs", report.upper_bound_pairs_checked},
          {"completed_blocks", report.completed_blocks_checked}});
    if (!report.ok()) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const roc::error& e) {
    emit({{"error", {{"kind", e.kind()}, {"message", e.what()}}}});
    return 1;
  } catch (const std::exception& e) {
    emit({{"error", {{"kind", "internal"}, {"message", e.what()}}}});
    return 1;
  }
}
