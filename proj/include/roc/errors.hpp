/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roc {

// Base class for every domain error raised by the library.  The CLI maps
// these to exit code 1 with a structured error record.
class error : public std::runtime_error {
 public:
  error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct parse_error : error {
  parse_error(const std::string& message, std::size_t offset)
      : error("parse", message + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

struct io_error : error {
  explicit io_error(const std::string& m) : error("io", m) {}
};

struct invalid_parameter : error {
  explicit invalid_parameter(const std::string& m) : error("invalid-parameter", m) {}
};

struct insufficient_data : error {
  explicit insufficient_data(const std::string& m) : error("insufficient-data", m) {}
};

// A pulled value contradicts the escape-bound witness attached to a name.
struct certificate_violation : error {
  explicit certificate_violation(const std::string& m) : error("certificate-violation", m) {}
};

struct no_permutation_error : error {
  explicit no_permutation_error(const std::string& m) : error("no-permutation", m) {}
};

struct bound_violation : error {
  explicit bound_violation(const std::string& m) : error("bound-violation", m) {}
};

struct search_exhausted : error {
  explicit search_exhausted(const std::string& m) : error("search-exhausted", m) {}
};

struct unsupported_model : error {
  explicit unsupported_model(const std::string& m) : error("unsupported-model", m) {}
};

struct hypothesis_violation : error {
  explicit hypothesis_violation(const std::string& m) : error("hypothesis-violation", m) {}
};

struct schedule_stall : error {
  explicit schedule_stall(const std::string& m) : error("schedule-stall", m) {}
};

struct denomination_error : error {
  explicit denomination_error(const std::string& m) : error("denomination", m) {}
};

struct split_infeasible : error {
  explicit split_infeasible(const std::string& m) : error("split-infeasible", m) {}
};

struct budget_exceeded : error {
  explicit budget_exceeded(const std::string& m) : error("budget-exceeded", m) {}
};

}  // namespace roc
