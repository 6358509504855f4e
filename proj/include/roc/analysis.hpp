/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <utility>
#include <vector>

#include "roc/modulus.hpp"
#include "roc/name.hpp"
#include "roc/roots.hpp"

namespace roc {

/// Root-test remainder bound: q in [0,1) with tail(n) <= q^n / (1-q) for all
/// n, established from |a_n| <= p^n for n >= m plus finitely many head checks.
struct RootBound {
  Rat q;
  Nat m = 0;
  std::string provenance;
};

/// Finds the least q on the grid {p} union {1 - 2^-j} such that
/// q^n/(1-q) dominates an exact upper bound of every head tail (n < m); the
/// geometric hypothesis |a_n| <= p^n for n >= m covers the rest and is
/// verified on the supplied terms.  Throws search_exhausted when no grid
/// value below 1 works, invalid_parameter when the hypothesis fails.
RootBound root_test_bound(const std::vector<DyadicRational>& terms, const Rat& p, Nat m);

/// s(n) = min { m : q^m/(1-q) <= 2^-n }, by exact rational comparison.
ModulusCertificate modulus_from_root_bound(const RootBound& b);

/// g(n) = sum of f(0..n+c), memoized.  The input stream plays the role of a
/// coefficient function here; values need not tend to infinity.
SeriesFn prefix_sum_series(const Name& f, Nat c);

/// Closed-form tail models for which both sides of the prefix-sum remainder
/// identity evaluate exactly.
struct TailModel {
  enum class Kind { linear, constant } kind;
  Nat param;  // linear: f(k) = k + param; constant: f(k) = param

  static TailModel linear(Nat a) { return {Kind::linear, a}; }
  static TailModel constant(Nat b) { return {Kind::constant, b}; }
};

/// Exact tail sum over k >= from of (a2 k^2 + a1 k + a0) 2^-k.
DyadicRational poly_geom_tail(const DyadicRational& a2, const DyadicRational& a1,
                              const DyadicRational& a0, Nat from);

/// Evaluates both sides of the remainder identity for g(n) = sum f(0..n+c):
///   sum_{k>=n} g(k) 2^-k  =  2^{-n+1} * sum_{k<n+c} f(k)
///                           + 2^{c+1} * sum_{k>=n+c} f(k) 2^-k
/// The left side comes from the closed form of the g-polynomial, the right
/// side from a literal head sum plus the f-tail closed form; the two routes
/// are independent.  The realized prefix of f is checked against the model.
std::pair<DyadicRational, DyadicRational> remainder_identity_check(const Name& f, Nat c,
                                                                   Nat n, TailModel model);

/// s(n) = 2 * r(n + d + 2), transferring an increasing modulus for the
/// f-series to one for the prefix-sum series; requires d >= c and the
/// caller-certified bound sum f(k) 2^-k <= 2^d.
ModulusCertificate prefix_sum_modulus(const ModulusCertificate& r, Nat d, Nat c);

/// Enclosure of the n-th roots of u(n) over n in [lo, hi]: the interval
/// spans the smallest lower and largest upper root bound on the window.
struct RootInterval {
  DyadicRational lo;
  DyadicRational hi;
};

RootInterval root_sequence_estimate(const SeriesFn& u, Nat lo, Nat hi, Nat grid_exp = 10);

/// Multiplicity generators for target root growth rho, with a convergence
/// certificate for sum r(k) 2^-k.
struct RhoSpec {
  enum class Kind { one, two, seq } kind = Kind::one;
  std::function<Rat(Nat)> rho_seq;  // for seq
  std::string label = "one";
  /// Set by seq_const: enables incremental power evaluation.
  std::optional<Rat> constant_rho;

  static RhoSpec one();
  static RhoSpec two();
  static RhoSpec seq_const(const Rat& rho);
};

struct RhoGenerator {
  SeriesFn r;
  ModulusCertificate cert;
};

RhoGenerator rho_generator(const RhoSpec& spec);

}  // namespace roc
