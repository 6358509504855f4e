/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/name.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "roc/errors.hpp"

namespace roc {

struct Name::State {
  std::vector<Nat> values;
  std::function<std::optional<Nat>()> next;
  bool ended = false;
  std::optional<EscapeBound> escape;

  // Incrementally tracked guard: largest level n with escape->at(n) <= index
  // of the value being pulled.  Values must stay above it.
  bool guard_active = false;
  Nat guard_level = 0;
  Nat guard_probe = 0;

  void append(Nat v) {
    std::size_t k = values.size();
    if (escape) {
      while (escape->covers(guard_probe) && escape->at(guard_probe) <= k) {
        guard_active = true;
        guard_level = guard_probe;
        ++guard_probe;
      }
      if (guard_active && v <= guard_level) {
        throw certificate_violation(
            "escape bound (" + escape->provenance + ") promised values > " +
            std::to_string(guard_level) + " from index " +
            std::to_string(escape->at(guard_level)) + ", but f(" +
            std::to_string(k) + ") = " + std::to_string(v));
      }
    }
    values.push_back(v);
  }
};

Name::Name() : s_(std::make_shared<State>()) { s_->ended = true; }

Name Name::from_values(std::vector<Nat> values, std::optional<EscapeBound> escape) {
  Name n;
  n.s_ = std::make_shared<State>();
  n.s_->escape = std::move(escape);
  n.s_->ended = true;
  for (Nat v : values) n.s_->append(v);
  return n;
}

Name Name::from_generator(std::function<std::optional<Nat>()> next,
                          std::optional<EscapeBound> escape) {
  Name n;
  n.s_ = std::make_shared<State>();
  n.s_->escape = std::move(escape);
  n.s_->next = std::move(next);
  n.s_->ended = false;
  return n;
}

std::size_t Name::available() const { return s_->values.size(); }
bool Name::exhausted() const { return s_->ended; }

bool Name::try_ensure(std::size_t len) const {
  while (s_->values.size() < len) {
    if (s_->ended) return false;
    std::optional<Nat> v = s_->next();
    if (!v) {
      s_->ended = true;
      return false;
    }
    s_->append(*v);
  }
  return true;
}

void Name::ensure(std::size_t len) const {
  if (!try_ensure(len)) {
    throw insufficient_data("name has only " + std::to_string(s_->values.size()) +
                            " values, need " + std::to_string(len));
  }
}

Nat Name::at(std::size_t k) const {
  ensure(k + 1);
  return s_->values[k];
}

const std::vector<Nat>& Name::realized() const { return s_->values; }
const std::optional<EscapeBound>& Name::escape() const { return s_->escape; }

bool Name::complete_at(Nat level, std::size_t prefix_len) const {
  if (s_->ended && s_->values.size() <= prefix_len) return true;
  if (!s_->escape || !s_->escape->covers(level)) return false;
  return s_->escape->at(level) <= prefix_len;
}

std::optional<Nat> Name::certified_level(std::size_t prefix_len) const {
  if (!complete_at(0, prefix_len)) return std::nullopt;
  // Levels above the largest realized value stay complete (zero count), so
  // cap the answer there.
  Nat cap = 0;
  std::size_t upto = std::min(prefix_len, s_->values.size());
  for (std::size_t k = 0; k < upto; ++k) cap = std::max(cap, s_->values[k]);
  Nat level = 0;
  while (level < cap && complete_at(level + 1, prefix_len)) ++level;
  return level;
}

Name linear_name(Nat a) { return affine_name(1, a); }

Name affine_name(Nat slope, Nat offset) {
  if (slope == 0) throw invalid_parameter("affine name needs slope >= 1");
  auto k = std::make_shared<Nat>(0);
  EscapeBound escape{
      [slope, offset](Nat n) -> Nat {
        if (n < offset) return 0;
        return (n - offset) / slope + 1;
      },
      std::nullopt,
      "affine(" + std::to_string(slope) + "," + std::to_string(offset) + ")"};
  return Name::from_generator(
      [k, slope, offset]() -> std::optional<Nat> { return slope * (*k)++ + offset; },
      escape);
}

Name alternating_counterexample_name() {
  auto k = std::make_shared<Nat>(0);
  return Name::from_generator([k]() -> std::optional<Nat> {
    Nat i = (*k)++;
    if (i % 2 == 1) return 1;
    if (i > 62) throw budget_exceeded("alternating counterexample exceeds 64-bit values past index 62");
    return Nat(1) << i;
  });
}

Name multiplicity_name(SeriesFn r, std::string label) {
  struct Gen {
    SeriesFn r;
    Nat value = 0;
    Int remaining = 0;
    bool primed = false;
    std::vector<Int> cumulative;  // cumulative[n] = sum of r(0..n)
  };
  auto g = std::make_shared<Gen>();
  g->r = r;
  EscapeBound escape{
      [g](Nat n) -> Nat {
        while (g->cumulative.size() <= n) {
          Nat k = g->cumulative.size();
          Int prev = k == 0 ? Int(0) : g->cumulative.back();
          g->cumulative.push_back(prev + g->r(k));
        }
        const Int& total = g->cumulative[n];
        // Saturate: callers only compare against realized prefix lengths.
        if (total > Int(std::numeric_limits<Nat>::max() >> 1))
          return std::numeric_limits<Nat>::max();
        return total.convert_to<Nat>();
      },
      std::nullopt,
      "multiplicity(" + label + ")"};
  return Name::from_generator(
      [g]() -> std::optional<Nat> {
        Nat scanned = 0;
        while (g->remaining == 0) {
          if (g->primed) ++g->value;
          g->primed = true;
          g->remaining = g->r(g->value);
          if (g->remaining < 0)
            throw invalid_parameter("multiplicity function returned a negative value");
          if (++scanned > (Nat(1) << 20))
            throw budget_exceeded("multiplicity function is zero on a very long range");
        }
        --g->remaining;
        return g->value;
      },
      escape);
}

DyadicRational partial_sum(const Name& f, std::size_t n) {
  f.ensure(n);
  DyadicRational acc;
  for (std::size_t k = 0; k < n; ++k) acc += DyadicRational(1, f.at(k));
  return acc;
}

}  // namespace roc
