#include "monge/eval.hpp"

#include <cmath>
#include <unordered_map>

namespace monge::sym {

Complex to_complex(const Rational& q) { return {Expr(q).approx(), 0.0L}; }

namespace {

// Keep the principal branch stable: a signed-zero imaginary part on the
// negative real axis would otherwise flip ln to -i*pi.
Complex unsigned_zero(Complex z) {
  if (z.imag() == 0) return {z.real(), 0.0L};
  return z;
}

bool finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

Complex int_pow(Complex b, long n) {
  bool invert = n < 0;
  unsigned long k = invert ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Complex acc(1.0L, 0.0L);
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return invert ? Complex(1.0L, 0.0L) / acc : acc;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

  Complex operator()(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    Complex v = compute(e);
    if (!finite(v)) throw DomainError("non-finite value", e);
    max_ = std::max(max_, std::abs(v));
    memo_.emplace(e.node(), v);
    return v;
  }

  long double max_intermediate() const { return max_; }

 private:
  Complex compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Constant:
        return {e.approx(), 0.0L};
      case Kind::Parameter:
      case Kind::Variable: {
        auto it = ctx_.values.find(e.name());
        if (it == ctx_.values.end()) throw DomainError("unassigned symbol", e);
        return it->second;
      }
      case Kind::Sum: {
        Complex s(0.0L, 0.0L);
        for (const auto& a : e.args()) s += (*this)(a);
        return s;
      }
      case Kind::Product: {
        Complex p(1.0L, 0.0L);
        for (const auto& a : e.args()) p *= (*this)(a);
        return p;
      }
      case Kind::Power: {
        Complex b = unsigned_zero((*this)(e.base()));
        const Expr& x = e.exponent();
        if (x.is_integer() && mpz_fits_slong_p(x.value().get_num_mpz_t())) {
          long n = mpz_get_si(x.value().get_num_mpz_t());
          if (n < 0 && b == Complex(0.0L, 0.0L)) throw DomainError("division by zero", e);
          return int_pow(b, n);
        }
        Complex p = (*this)(x);
        if (b == Complex(0.0L, 0.0L)) {
          if (p.real() > 0) return {0.0L, 0.0L};
          throw DomainError("zero to a non-positive power", e);
        }
        if (p.imag() == 0 && p.real() == std::round(p.real()) && std::fabs(p.real()) < 1e6L) {
          return int_pow(b, static_cast<long>(p.real()));
        }
        return std::exp(p * std::log(b));
      }
      case Kind::Exp:
        return std::exp((*this)(e.args()[0]));
      case Kind::Log: {
        Complex a = unsigned_zero((*this)(e.args()[0]));
        if (a == Complex(0.0L, 0.0L)) throw DomainError("ln(0)", e);
        return std::log(a);
      }
    }
    return {0.0L, 0.0L};
  }

  const EvalContext& ctx_;
  long double max_ = 0;
  std::unordered_map<const Node*, Complex> memo_;
};

class ExactEvaluator {
 public:
  explicit ExactEvaluator(const ExactContext& ctx) : ctx_(ctx) {}

  std::optional<Rational> operator()(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    auto v = compute(e);
    memo_.emplace(e.node(), v);
    return v;
  }

 private:
  std::optional<Rational> compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Constant:
        return e.value();
      case Kind::Parameter:
      case Kind::Variable: {
        auto it = ctx_.find(e.name());
        if (it == ctx_.end()) throw DomainError("unassigned symbol", e);
        return it->second;
      }
      case Kind::Sum: {
        Rational s(0);
        for (const auto& a : e.args()) {
          auto v = (*this)(a);
          if (!v) return std::nullopt;
          s += *v;
        }
        return s;
      }
      case Kind::Product: {
        Rational p(1);
        bool unknown = false;
        for (const auto& a : e.args()) {
          auto v = (*this)(a);
          if (!v) {
            unknown = true;
            continue;
          }
          p *= *v;
        }
        if (unknown && sgn(p) != 0) return std::nullopt;
        return p;
      }
      case Kind::Power: {
        auto b = (*this)(e.base());
        auto x = (*this)(e.exponent());
        if (!b || !x) return std::nullopt;
        if (sgn(*b) == 0 && sgn(*x) <= 0) throw DomainError("division by zero", e);
        if (*b == 1) return Rational(1);
        Expr folded = pow(Expr(*b), Expr(*x));
        if (folded.is_constant()) return folded.value();
        return std::nullopt;
      }
      case Kind::Exp: {
        auto a = (*this)(e.args()[0]);
        if (a && sgn(*a) == 0) return Rational(1);
        return std::nullopt;
      }
      case Kind::Log: {
        auto a = (*this)(e.args()[0]);
        if (!a) return std::nullopt;
        if (sgn(*a) == 0) throw DomainError("ln(0)", e);
        if (*a == 1) return Rational(0);
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const ExactContext& ctx_;
  std::unordered_map<const Node*, std::optional<Rational>> memo_;
};

}  // namespace

Complex eval(const Expr& e, const EvalContext& ctx) {
  Evaluator ev(ctx);
  return ev(e);
}

TrackedValue eval_tracked(const Expr& e, const EvalContext& ctx) {
  Evaluator ev(ctx);
  Complex v = ev(e);
  return {v, ev.max_intermediate()};
}

std::optional<Rational> eval_exact(const Expr& e, const ExactContext& ctx) {
  ExactEvaluator ev(ctx);
  return ev(e);
}

}  // namespace monge::sym
