#include "monge/zero_test.hpp"

#include <algorithm>
#include <cmath>

#include "monge/parse.hpp"

namespace monge::sym {

SymbolDomain ZeroTestConfig::domain_for(std::string_view symbol) const {
  if (auto it = domains.find(symbol); it != domains.end()) return it->second;
  if (symbol == "z2") return SymbolDomain::interval(0.5L, 2.0L);
  if (is_jet_variable_name(symbol)) return SymbolDomain::interval(-2.0L, 2.0L);
  return SymbolDomain::rationals({Rational(2), Rational(3), Rational(5), rational(3, 4),
                                  rational(7, 3), rational(5, 2), rational(4, 3)});
}

Sampler::Sampler(const ZeroTestConfig& cfg, std::uint64_t stream)
    : cfg_(cfg), rng_(cfg.seed ^ (stream * 0x9e3779b97f4a7c15ULL)) {}

long double Sampler::uniform() {
  // 53 random bits; independent of the standard library's distributions so
  // sample sequences are identical across toolchains.
  return static_cast<long double>(rng_() >> 11) * 0x1.0p-53L;
}

EvalContext Sampler::draw(const std::set<std::string>& symbols) {
  EvalContext ctx;
  for (const auto& s : symbols) {
    SymbolDomain d = cfg_.domain_for(s);
    if (d.type == SymbolDomain::Type::RationalPool && !d.pool.empty()) {
      std::size_t i = static_cast<std::size_t>(rng_() % d.pool.size());
      ctx.set(s, to_complex(d.pool[i]));
    } else {
      ctx.set(s, {d.lo + (d.hi - d.lo) * uniform(), 0.0L});
    }
  }
  return ctx;
}

int for_each_sample(const ZeroTestConfig& cfg, const std::set<std::string>& symbols,
                    const std::function<void(const EvalContext&)>& body,
                    std::uint64_t stream) {
  Sampler sampler(cfg, stream);
  int ok = 0;
  int failures = 0;
  const int max_draws = 2 * std::max(cfg.samples, 1);
  for (int draw = 0; draw < max_draws && ok < cfg.samples; ++draw) {
    EvalContext ctx = sampler.draw(symbols);
    try {
      body(ctx);
      ++ok;
    } catch (const DomainError&) {
      ++failures;
    }
  }
  if (ok < cfg.samples) {
    throw DomainTooSmall("domain too small: " + std::to_string(failures) +
                         " of " + std::to_string(ok + failures) + " samples hit domain errors");
  }
  return failures;
}

std::set<std::string> free_symbols(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const auto& e : es) {
    auto s = free_symbols(e);
    out.insert(s.begin(), s.end());
  }
  return out;
}

ZeroTestResult all_zero(const std::vector<Expr>& es, const ZeroTestConfig& cfg) {
  ZeroTestResult r;
  std::vector<Expr> live;
  for (const auto& e : es) {
    Expr s = simplify(e);
    if (!s.is_zero()) live.push_back(s);
  }
  if (live.empty()) {
    r.zero = true;
    r.symbolic = true;
    return r;
  }
  long double worst = 0;
  r.domain_failures = for_each_sample(cfg, free_symbols(live), [&](const EvalContext& ctx) {
    long double local = 0;
    for (const auto& e : live) {
      TrackedValue v = eval_tracked(e, ctx);
      local = std::max(local, std::abs(v.value) / (1 + v.max_intermediate));
    }
    worst = std::max(worst, local);
  });
  r.samples = cfg.samples;
  r.max_residual = static_cast<double>(worst);
  r.zero = worst <= cfg.tol;
  return r;
}

ZeroTestResult is_zero(const Expr& e, const ZeroTestConfig& cfg) { return all_zero({e}, cfg); }

}  // namespace monge::sym
