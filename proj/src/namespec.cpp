/* SPDX-License-Identifier: Apache-2.0 */

#include "roc/namespec.hpp"

#include <cctype>
#include <fstream>

#include "roc/combinators.hpp"
#include "roc/diagonal.hpp"
#include "roc/errors.hpp"

namespace roc {

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) { throw parse_error(what, pos); }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string ident() {
    std::size_t begin = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '-' ||
            text[pos] == '_'))
      ++pos;
    if (pos == begin) fail("expected an identifier");
    return std::string(text.substr(begin, pos - begin));
  }

  Nat number() {
    std::size_t begin = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == begin) fail("expected a number");
    return std::stoull(std::string(text.substr(begin, pos - begin)));
  }

  std::string until_close() {
    std::size_t begin = pos;
    while (pos < text.size() && text[pos] != ')') ++pos;
    return std::string(text.substr(begin, pos - begin));
  }

  NameSpec spec() {
    std::string head = ident();
    NameSpec out;
    if (head == "linear") {
      out.kind = NameSpec::Kind::linear;
      expect('(');
      out.a = number();
      expect(')');
    } else if (head == "affine") {
      out.kind = NameSpec::Kind::affine;
      expect('(');
      out.slope = number();
      expect(',');
      out.a = number();
      expect(')');
      if (out.slope == 0) fail("affine slope must be >= 1");
    } else if (head == "listfile") {
      out.kind = NameSpec::Kind::listfile;
      expect('(');
      out.path = until_close();
      expect(')');
    } else if (head == "alternating-counterexample") {
      out.kind = NameSpec::Kind::alternating;
    } else if (head == "rho") {
      out.kind = NameSpec::Kind::rho;
      expect('(');
      std::string body = until_close();
      expect(')');
      if (body.rfind("seq,", 0) == 0) body = "seq:" + body.substr(4);
      rho_spec_from_label(body);  // validate now
      out.rho_label = body;
    } else if (head == "sum" || head == "product") {
      out.kind = head == "sum" ? NameSpec::Kind::sum : NameSpec::Kind::product;
      expect('(');
      out.children.push_back(spec());
      expect(',');
      out.children.push_back(spec());
      expect(')');
    } else {
      pos -= head.size();
      fail("unknown name source '" + head + "'");
    }
    return out;
  }
};

}  // namespace

NameSpec parse_name_spec(std::string_view text) {
  Parser p{text};
  NameSpec out = p.spec();
  if (p.pos != text.size()) p.fail("trailing characters");
  return out;
}

std::string to_string(const NameSpec& spec) {
  switch (spec.kind) {
    case NameSpec::Kind::linear: return "linear(" + std::to_string(spec.a) + ")";
    case NameSpec::Kind::affine:
      return "affine(" + std::to_string(spec.slope) + "," + std::to_string(spec.a) + ")";
    case NameSpec::Kind::listfile: return "listfile(" + spec.path + ")";
    case NameSpec::Kind::alternating: return "alternating-counterexample";
    case NameSpec::Kind::rho: {
      std::string body = spec.rho_label;
      if (body.rfind("seq:", 0) == 0) body = "seq," + body.substr(4);
      return "rho(" + body + ")";
    }
    case NameSpec::Kind::sum:
      return "sum(" + to_string(spec.children[0]) + "," + to_string(spec.children[1]) + ")";
    case NameSpec::Kind::product:
      return "product(" + to_string(spec.children[0]) + "," + to_string(spec.children[1]) + ")";
  }
  return "?";
}

Name instantiate(const NameSpec& spec) {
  switch (spec.kind) {
    case NameSpec::Kind::linear: return linear_name(spec.a);
    case NameSpec::Kind::affine: return affine_name(spec.slope, spec.a);
    case NameSpec::Kind::listfile: {
      std::ifstream in(spec.path);
      if (!in) throw io_error("cannot read name file: " + spec.path);
      std::vector<Nat> values;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
          values.push_back(std::stoull(line));
        } catch (const std::exception&) {
          throw io_error("bad exponent line in " + spec.path + ": " + line);
        }
      }
      return Name::from_values(std::move(values));
    }
    case NameSpec::Kind::alternating: return alternating_counterexample_name();
    case NameSpec::Kind::rho: {
      auto gen = rho_generator(rho_spec_from_label(spec.rho_label));
      return multiplicity_name(gen.r, spec.rho_label);
    }
    case NameSpec::Kind::sum:
      return sum_name(instantiate(spec.children[0]), instantiate(spec.children[1]));
    case NameSpec::Kind::product:
      return product_name(instantiate(spec.children[0]), instantiate(spec.children[1]));
  }
  throw invalid_parameter("unknown name spec");
}

std::string FuncSpec::to_string() const {
  return "affine(" + std::to_string(slope) + "," + std::to_string(offset) + ")";
}

FuncSpec parse_func_spec(std::string_view text) {
  Parser p{text};
  std::string head = p.ident();
  if (head != "affine") p.fail("expected affine(m,b)");
  p.expect('(');
  FuncSpec out;
  out.slope = p.number();
  p.expect(',');
  out.offset = p.number();
  p.expect(')');
  if (p.pos != text.size()) p.fail("trailing characters");
  if (out.slope == 0) p.fail("slope must be >= 1");
  return out;
}

}  // namespace roc
