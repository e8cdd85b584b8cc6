#pragma once

// Randomized numeric identity testing.  Symbols are sampled from per-symbol
// domains with a seeded generator, so a (seed, config) pair always produces
// the same points.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "monge/eval.hpp"
#include "monge/expr.hpp"

namespace monge::sym {

struct SymbolDomain {
  enum class Type { RealInterval, RationalPool };
  Type type = Type::RealInterval;
  long double lo = -2, hi = 2;
  std::vector<Rational> pool;

  static SymbolDomain interval(long double lo, long double hi) {
    return {Type::RealInterval, lo, hi, {}};
  }
  static SymbolDomain rationals(std::vector<Rational> pool) {
    return {Type::RationalPool, 0, 0, std::move(pool)};
  }
};

struct ZeroTestConfig {
  int samples = 32;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::map<std::string, SymbolDomain, std::less<>> domains;

  // Explicit entry, else z2 in (0.5, 2), other jet variables in [-2, 2],
  // parameters from a pool avoiding 0, 1/2 and 1.
  SymbolDomain domain_for(std::string_view symbol) const;
};

class DomainTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZeroTestResult {
  bool zero = false;
  double max_residual = 0;
  bool symbolic = false;  // decided by simplification alone
  int samples = 0;
  int domain_failures = 0;
};

class Sampler {
 public:
  Sampler(const ZeroTestConfig& cfg, std::uint64_t stream = 0);
  EvalContext draw(const std::set<std::string>& symbols);

 private:
  long double uniform();
  const ZeroTestConfig& cfg_;
  std::mt19937_64 rng_;
};

// Runs `body` at cfg.samples points over `symbols`, redrawing points where
// body throws DomainError (at most 2*samples draws in total).  Throws
// DomainTooSmall when fewer than cfg.samples points succeed.  Returns the
// number of domain failures.
int for_each_sample(const ZeroTestConfig& cfg, const std::set<std::string>& symbols,
                    const std::function<void(const EvalContext&)>& body,
                    std::uint64_t stream = 0);

// residual = |v| / (1 + largest intermediate magnitude).
ZeroTestResult is_zero(const Expr& e, const ZeroTestConfig& cfg);
// All expressions share each sample point; the residual is the maximum.
ZeroTestResult all_zero(const std::vector<Expr>& es, const ZeroTestConfig& cfg);

std::set<std::string> free_symbols(const std::vector<Expr>& es);

}  // namespace monge::sym
