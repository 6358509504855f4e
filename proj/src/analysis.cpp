/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/analysis.hpp"

#include <algorithm>
#include <memory>

#include "roc/errors.hpp"

namespace roc {

namespace {

Rat rat_pow(const Rat& base, Nat k) {
  Int num = boost::multiprecision::pow(boost::multiprecision::numerator(base),
                                       static_cast<unsigned>(k));
  Int den = boost::multiprecision::pow(boost::multiprecision::denominator(base),
                                       static_cast<unsigned>(k));
  return Rat(num, den);
}

Int ceil_rat(const Rat& q) {
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  if (num < 0) throw invalid_parameter("ceil_rat expects a non-negative rational");
  return (num + den - 1) / den;
}

}  // namespace

RootBound root_test_bound(const std::vector<DyadicRational>& terms, const Rat& p, Nat m) {
  if (p < 0 || p >= 1) throw invalid_parameter("root test needs p in [0, 1)");
  for (std::size_t n = m; n < terms.size(); ++n) {
    if (terms[n].abs().to_rational() > rat_pow(p, n))
      throw invalid_parameter("hypothesis |a_n| <= p^n fails at n = " + std::to_string(n));
  }

  // Exact upper bound on each head tail: the realized terms plus the
  // geometric bound for everything past the window.
  std::vector<Rat> head_tail(m, Rat(0));
  if (m > 0) {
    Rat beyond = rat_pow(p, terms.size()) / (Rat(1) - p);
    Rat acc = beyond;
    for (std::size_t n = terms.size(); n-- > 0;) {
      acc += terms[n].abs().to_rational();
      if (n < m) head_tail[n] = acc;
    }
  }

  std::vector<Rat> grid{p};
  for (unsigned j = 1; j <= 64; ++j) {
    Rat q = Rat(1) - Rat(Int(1), Int(1) << j);
    if (q >= p) grid.push_back(q);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (const Rat& q : grid) {
    bool ok = true;
    for (std::size_t n = 0; n < m && ok; ++n)
      if (head_tail[n] > rat_pow(q, n) / (Rat(1) - q)) ok = false;
    if (ok) return RootBound{q, m, "root-test(p=" + p.str() + ", m=" + std::to_string(m) + ")"};
  }
  throw search_exhausted("no grid value q < 1 dominates the head tails");
}

ModulusCertificate modulus_from_root_bound(const RootBound& b) {
  // q^m <= 2^-n (1-q) with q = a/c reduced is the integer comparison
  //   a^m * c * 2^n <= (c - a) * c^m,
  // tracked incrementally without any rational normalization.
  struct Memo {
    std::vector<Int> s;
    Nat next_m = 0;
    Int a_pow = 1;  // a^next_m
    Int c_pow = 1;  // c^next_m
  };
  auto memo = std::make_shared<Memo>();
  Int a = boost::multiprecision::numerator(b.q);
  Int c = boost::multiprecision::denominator(b.q);
  ModulusCertificate cert;
  cert.target = SeriesTarget::raw;
  cert.provenance = "root-remainder(q=" + b.q.str() + ")";
  cert.at = [memo, a, c](Nat n) -> Int {
    while (memo->s.size() <= n) {
      Nat level = memo->s.size();
      auto satisfied = [&]() {
        if (a == 0 && memo->next_m >= 1) return true;
        Int lhs = memo->a_pow * c << static_cast<unsigned>(level);
        Int rhs = (c - a) * memo->c_pow;
        return lhs <= rhs;
      };
      while (!satisfied()) {
        memo->a_pow *= a;
        memo->c_pow *= c;
        ++memo->next_m;
      }
      memo->s.push_back(Int(memo->next_m));
    }
    return memo->s[n];
  };
  return cert;
}

SeriesFn prefix_sum_series(const Name& f, Nat c) {
  auto sums = std::make_shared<std::vector<Int>>();  // sums[k] = f(0) + ... + f(k)
  Name stream = f;
  return [sums, stream, c](Nat n) -> Int {
    Nat upto = n + c;
    while (sums->size() <= upto) {
      std::size_t k = sums->size();
      Int prev = k == 0 ? Int(0) : sums->back();
      sums->push_back(prev + stream.at(k));
    }
    return (*sums)[static_cast<std::size_t>(upto)];
  };
}

DyadicRational poly_geom_tail(const DyadicRational& a2, const DyadicRational& a1,
                              const DyadicRational& a0, Nat from) {
  if (from > (Nat(1) << 40)) throw budget_exceeded("poly_geom_tail index out of desk scale");
  // sum_{k>=N} 2^-k           = 2^{-N+1}
  // sum_{k>=N} k 2^-k         = (N+1) 2^{-N+1}
  // sum_{k>=N} k^2 2^-k       = (N^2+2N+3) 2^{-N+1}
  DyadicRational base = geometric_tail(from);
  DyadicRational n_dy = DyadicRational::from_integer(Int(from));
  DyadicRational t1 = (n_dy + DyadicRational::from_integer(1)) * base;
  DyadicRational t2 =
      (n_dy * n_dy + DyadicRational::from_integer(2) * n_dy + DyadicRational::from_integer(3)) *
      base;
  return a2 * t2 + a1 * t1 + a0 * base;
}

namespace {

// f as a degree-<=1 polynomial k -> k + a or k -> b.
struct ModelPoly {
  DyadicRational k1, k0;
};

ModelPoly model_poly(TailModel model) {
  if (model.kind == TailModel::Kind::linear)
    return {DyadicRational::from_integer(1), DyadicRational::from_integer(Int(model.param))};
  return {DyadicRational(), DyadicRational::from_integer(Int(model.param))};
}

Nat model_value(TailModel model, Nat k) {
  return model.kind == TailModel::Kind::linear ? k + model.param : model.param;
}

}  // namespace

std::pair<DyadicRational, DyadicRational> remainder_identity_check(const Name& f, Nat c,
                                                                   Nat n, TailModel model) {
  std::size_t head_len = static_cast<std::size_t>(n) + c;
  f.ensure(head_len);
  for (std::size_t k = 0; k < head_len; ++k) {
    if (f.at(k) != model_value(model, k))
      throw unsupported_model("realized prefix does not match the declared tail model at k=" +
                              std::to_string(k));
  }

  // Left side: closed form of sum_{k>=n} g(k) 2^-k for the g-polynomial.
  DyadicRational half(1, 1);
  DyadicRational lhs;
  if (model.kind == TailModel::Kind::linear) {
    // g(k) = (k+c)(k+c+1)/2 + a(k+c+1)
    //      = 1/2 k^2 + ((2c+1)/2 + a) k + (c(c+1)/2 + a(c+1))
    DyadicRational a = DyadicRational::from_integer(Int(model.param));
    DyadicRational cc = DyadicRational::from_integer(Int(c));
    DyadicRational one = DyadicRational::from_integer(1);
    DyadicRational a2 = half;
    DyadicRational a1 = (DyadicRational::from_integer(2) * cc + one) * half + a;
    DyadicRational a0 = cc * (cc + one) * half + a * (cc + one);
    lhs = poly_geom_tail(a2, a1, a0, n);
  } else {
    // g(k) = b (k + c + 1)
    DyadicRational b = DyadicRational::from_integer(Int(model.param));
    lhs = poly_geom_tail(DyadicRational(), b,
                         b * DyadicRational::from_integer(Int(c) + 1), n);
  }

  // Right side: literal head sum plus the model's tail closed form.
  DyadicRational head;
  for (std::size_t k = 0; k < head_len; ++k)
    head += DyadicRational::from_integer(Int(f.at(k)));
  ModelPoly fp = model_poly(model);
  DyadicRational f_tail = poly_geom_tail(DyadicRational(), fp.k1, fp.k0, n + c);
  DyadicRational rhs = DyadicRational::power_of_two(1 - static_cast<std::int64_t>(n)) * head +
                       DyadicRational::power_of_two(static_cast<std::int64_t>(c) + 1) * f_tail;
  return {lhs, rhs};
}

ModulusCertificate prefix_sum_modulus(const ModulusCertificate& r, Nat d, Nat c) {
  if (d < c) throw invalid_parameter("prefix_sum_modulus needs d >= c");
  if (r.target != SeriesTarget::u_series)
    throw invalid_parameter("prefix_sum_modulus expects a coefficient-series certificate");
  auto base = r.at;
  ModulusCertificate out;
  out.target = SeriesTarget::u_series;
  out.conditional = r.conditional;
  out.provenance = "prefix-sum(d=" + std::to_string(d) + ", c=" + std::to_string(c) + ") of " +
                   r.provenance;
  out.at = [base, d](Nat n) -> Int { return 2 * base(n + d + 2); };
  return out;
}

RootInterval root_sequence_estimate(const SeriesFn& u, Nat lo, Nat hi, Nat grid_exp) {
  if (lo > hi) throw invalid_parameter("empty root estimation window");
  if (lo == 0) throw invalid_parameter("root estimation window must start at n >= 1");
  RootInterval out;
  bool first = true;
  for (Nat n = lo; n <= hi; ++n) {
    Int value = u(n);
    if (value < 0) throw invalid_parameter("negative multiplicity value");
    RootEnclosure e = nth_root_enclosure(value, n, grid_exp);
    if (first || e.lo < out.lo) out.lo = e.lo;
    if (first || e.hi > out.hi) out.hi = e.hi;
    first = false;
  }
  return out;
}

RhoSpec RhoSpec::one() { return RhoSpec{Kind::one, nullptr, "one", std::nullopt}; }
RhoSpec RhoSpec::two() { return RhoSpec{Kind::two, nullptr, "two", std::nullopt}; }
RhoSpec RhoSpec::seq_const(const Rat& rho) {
  if (rho < 0) throw invalid_parameter("rho sequence values must be non-negative");
  return RhoSpec{Kind::seq, [rho](Nat) { return rho; }, "seq:" + rho.str(), rho};
}

namespace {

SeriesFn memoized(std::function<Int(Nat)> fn) {
  auto cache = std::make_shared<std::vector<Int>>();
  return [cache, fn](Nat n) -> Int {
    while (cache->size() <= n) cache->push_back(fn(cache->size()));
    return (*cache)[static_cast<std::size_t>(n)];
  };
}

}  // namespace

RhoGenerator rho_generator(const RhoSpec& spec) {
  constexpr Nat kWindow = 48;
  switch (spec.kind) {
    case RhoSpec::Kind::one: {
      SeriesFn r = [](Nat n) -> Int { return Int(n); };
      // Exact tail: sum_{k>=m} k 2^-k = (m+1) 2^{-m+1}, so the least valid
      // index is min{ m : m+1 <= 2^{m-n-1} }.  The scan uses only integer
      // shift comparisons and stays cheap at the depths the staged
      // construction asks for, unlike a geometric remainder chain.
      struct Memo {
        std::vector<Int> s;
        Nat m = 0;
      };
      auto memo = std::make_shared<Memo>();
      ModulusCertificate cert;
      cert.target = SeriesTarget::u_series;
      cert.provenance = "rho(one) poly-tail";
      cert.at = [memo](Nat n) -> Int {
        while (memo->s.size() <= n) {
          Nat level = memo->s.size();
          Nat m = memo->m;
          auto ok = [level](Nat cand) {
            if (cand < level + 2) return false;
            Nat shift = cand - level - 1;
            if (shift >= 63) return true;  // cand+1 < 2^63 <= 2^shift
            return Int(cand) + 1 <= (Int(1) << static_cast<unsigned>(shift));
          };
          while (!ok(m)) ++m;
          memo->m = m;
          memo->s.push_back(Int(m));
        }
        return memo->s[n];
      };
      return {r, cert};
    }
    case RhoSpec::Kind::two: {
      SeriesFn r = memoized([](Nat n) -> Int {
        if (n == 0) return 0;
        return ceil_rat(Rat(Int(1) << static_cast<unsigned>(n), Int(n) * Int(n)));
      });
      // The terms behave like 1/n^2, so no geometric bound dominates; the
      // certificate comes from sum_{k>=m} (1/k^2 + 2^-k) <= 1/(m-1) + 2^-m+1
      // with m = 2^{n+1} + 1.
      ModulusCertificate cert;
      cert.target = SeriesTarget::u_series;
      cert.provenance = "rho(two) inverse-square-tail";
      cert.at = [](Nat n) -> Int {
        if (n > (Nat(1) << 20)) throw budget_exceeded("rho(two) modulus index out of desk scale");
        return (Int(1) << static_cast<unsigned>(n + 1)) + 1;
      };
      return {r, cert};
    }
    case RhoSpec::Kind::seq: {
      if (!spec.rho_seq) throw invalid_parameter("rho(seq) needs a sequence");
      auto seq = spec.rho_seq;
      SeriesFn r;
      if (spec.constant_rho) {
        // Constant sequence: keep running numerator/denominator powers.  A
        // power-of-two denominator turns the ceiling into a shift.
        struct Pow {
          Int num = 1, den = 1;
          Nat k = 0;
        };
        auto pow = std::make_shared<Pow>();
        Int num = boost::multiprecision::numerator(*spec.constant_rho);
        Int den = boost::multiprecision::denominator(*spec.constant_rho);
        bool den_pow2 = den == (Int(1) << boost::multiprecision::lsb(den));
        unsigned den_bits = den_pow2 ? boost::multiprecision::lsb(den) : 0;
        r = memoized([pow, num, den, den_pow2, den_bits](Nat n) -> Int {
          while (pow->k < n) {
            pow->num *= num;
            pow->den *= den;
            ++pow->k;
          }
          if (den_pow2) {
            unsigned shift = den_bits * static_cast<unsigned>(n);
            Int mask = (Int(1) << shift) - 1;
            Int q = pow->num >> shift;
            return (pow->num & mask) == 0 ? q : q + 1;
          }
          return (pow->num + pow->den - 1) / pow->den;
        });
      } else {
        r = memoized([seq](Nat n) -> Int {
          Rat rho = seq(n);
          if (rho < 0) throw invalid_parameter("rho sequence values must be non-negative");
          return ceil_rat(rat_pow(rho, n));
        });
      }
      std::vector<DyadicRational> terms;
      for (Nat n = 0; n < kWindow; ++n) {
        Int v = r(n);
        terms.push_back(DyadicRational(v, n));
      }
      // Least grid p and earliest m such that the window is dominated.
      for (unsigned j = 1; j <= 12; ++j) {
        Rat p = Rat(1) - Rat(Int(1), Int(1) << j);
        for (Nat m = 0; m <= kWindow / 2; ++m) {
          bool dominated = true;
          for (Nat n = m; n < kWindow && dominated; ++n)
            if (terms[n].to_rational() > rat_pow(p, n)) dominated = false;
          if (!dominated) continue;
          RootBound b = root_test_bound(terms, p, m);
          ModulusCertificate cert = modulus_from_root_bound(b);
          cert.target = SeriesTarget::u_series;
          cert.conditional = true;  // only the window was inspected
          cert.provenance = "rho(" + spec.label + ") window<" + std::to_string(kWindow) + " " +
                            cert.provenance;
          return {r, cert};
        }
      }
      throw search_exhausted("rho(seq): no geometric bound dominates the inspected window");
    }
  }
  throw invalid_parameter("unknown rho spec");
}

}  // namespace roc
