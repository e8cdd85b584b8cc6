#pragma once

// Plain-text expression grammar shared by the CLI and model files:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | symbol | func '(' expr ')' | '(' expr ')'
// with func in {exp, ln, log, sqrt}.  Numbers are exact: "3", "1/2" and
// "0.25" all parse to rationals.

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "monge/expr.hpp"

namespace monge::sym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Jet-variable names: x, y, z and z<digits>.  Every other identifier is a
// parameter.
bool is_jet_variable_name(std::string_view name);

Expr parse(std::string_view text);

// Parses a rational literal such as "-3", "5/2" or "0.125".
Rational parse_rational(std::string_view text);

}  // namespace monge::sym
