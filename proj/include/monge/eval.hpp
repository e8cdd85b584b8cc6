#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "monge/expr.hpp"

namespace monge::sym {

using Complex = std::complex<long double>;

class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, const Expr& subterm)
      : std::runtime_error(what + " in " + subterm.str()), subterm_(subterm) {}
  const Expr& subterm() const { return subterm_; }

 private:
  Expr subterm_;
};

struct EvalContext {
  std::map<std::string, Complex, std::less<>> values;
  // ln and non-integer powers use the principal branch (cut on the negative
  // real axis, imaginary part in (-pi, pi]).
  static constexpr const char* branch = "principal";

  EvalContext& set(std::string_view name, Complex v) {
    values[std::string(name)] = v;
    return *this;
  }
};

using ExactContext = std::map<std::string, Rational, std::less<>>;

struct TrackedValue {
  Complex value;
  long double max_intermediate = 0;  // largest |value| of any subterm
};

// Throws DomainError on ln(0), 0^(negative), non-finite values and
// unassigned symbols.
Complex eval(const Expr& e, const EvalContext& ctx);
TrackedValue eval_tracked(const Expr& e, const EvalContext& ctx);

// Exact evaluation; empty when a subterm is irrational (e.g. exp(1) or
// 2^(1/2)).  Throws DomainError like eval.
std::optional<Rational> eval_exact(const Expr& e, const ExactContext& ctx);

Complex to_complex(const Rational& q);

}  // namespace monge::sym
