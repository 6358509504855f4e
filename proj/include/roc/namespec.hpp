/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "roc/analysis.hpp"
#include "roc/name.hpp"

namespace roc {

/// Parsed name expression: builtin sources and combinator applications.
///
///   linear(a)                   f(k) = k + a
///   affine(m,b)                 f(k) = m*k + b, m >= 1
///   listfile(path)              one decimal exponent per line
///   alternating-counterexample  2^k at even k, 1 at odd k
///   rho(one) | rho(two) | rho(seq,N/D)
///   sum(S,S) | product(S,S)
///
/// Parsing is deterministic and round-trips through to_string; listfile I/O
/// is deferred to instantiation.
struct NameSpec {
  enum class Kind { linear, affine, listfile, alternating, rho, sum, product };
  Kind kind = Kind::linear;
  Nat a = 0;                      // linear offset / affine offset
  Nat slope = 1;                  // affine slope
  std::string path;               // listfile
  std::string rho_label;          // rho
  std::vector<NameSpec> children; // sum / product
};

/// Throws parse_error with the byte offset of the first offending character.
NameSpec parse_name_spec(std::string_view text);

std::string to_string(const NameSpec& spec);

/// Builds the name; reads files now (io_error on failure).
Name instantiate(const NameSpec& spec);

/// Increasing function literal "affine(m,b)": n -> m*n + b with m >= 1.
struct FuncSpec {
  Nat slope = 1;
  Nat offset = 0;

  Nat operator()(Nat n) const { return slope * n + offset; }
  std::string to_string() const;
};

FuncSpec parse_func_spec(std::string_view text);

}  // namespace roc
