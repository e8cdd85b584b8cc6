#include "monge/expr.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace monge::sym {

struct Node {
  Kind kind = Kind::Constant;
  std::size_t hash = 0;
  std::uint64_t mask = 0;
  Rational value;
  long double approx = 0;
  std::string name;
  std::vector<Expr> args;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = std::hash<long>{}(mpz_get_si(q.get_num_mpz_t()));
  h = hash_combine(h, std::hash<long>{}(mpz_get_si(q.get_den_mpz_t())));
  h = hash_combine(h, static_cast<std::size_t>(mpz_sizeinbase(q.get_num_mpz_t(), 2)));
  return hash_combine(h, static_cast<std::size_t>(sgn(q) + 1));
}

// Two doubles carry more than long double precision.
long double to_long_double(const Rational& q) {
  mpf_class f(q, 128);
  double hi = f.get_d();
  mpf_class rest = f - mpf_class(hi, 128);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

std::uint64_t name_bit(std::string_view name) {
  return std::uint64_t{1} << (std::hash<std::string_view>{}(name) % 64);
}

}  // namespace

struct NodeFactory {
  static Expr constant(const Rational& q) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = q;
    n->value.canonicalize();
    n->hash = hash_combine(0x51ed, hash_rational(n->value));
    n->approx = to_long_double(n->value);
    return Expr(std::move(n));
  }

  static Expr symbol(Kind kind, std::string_view name) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->name = std::string(name);
    n->hash = hash_combine(static_cast<std::size_t>(kind) * 7919,
                           std::hash<std::string_view>{}(name));
    n->mask = name_bit(name);
    return Expr(std::move(n));
  }

  static Expr composite(Kind kind, std::vector<Expr> args) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    std::size_t h = static_cast<std::size_t>(kind) * 104729;
    for (const auto& a : args) {
      h = hash_combine(h, a.hash());
      n->mask |= a.symbol_mask();
    }
    n->hash = h;
    n->args = std::move(args);
    return Expr(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = NodeFactory::constant(Rational(0));
  return z;
}

const Expr& one_expr() {
  static const Expr o = NodeFactory::constant(Rational(1));
  return o;
}

bool is_integer_value(const Rational& q) {
  return mpz_cmp_ui(q.get_den_mpz_t(), 1) == 0;
}

// Exact q-th root of a non-negative integer, if it exists.
bool exact_root(const mpz_class& n, unsigned long k, mpz_class& out) {
  if (n < 0) return false;
  return mpz_root(out.get_mpz_t(), n.get_mpz_t(), k) != 0;
}

std::optional<Rational> rational_power(const Rational& base, const Rational& e) {
  if (is_integer_value(e)) {
    if (!mpz_fits_slong_p(e.get_num_mpz_t())) return std::nullopt;
    long n = mpz_get_si(e.get_num_mpz_t());
    if (base == 0) {
      if (n > 0) return Rational(0);
      return std::nullopt;
    }
    if (std::labs(n) > 4096) return std::nullopt;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(std::labs(n)));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(std::labs(n)));
    Rational r = n > 0 ? Rational(num, den) : Rational(den, num);
    r.canonicalize();
    return r;
  }
  if (base == 0) {
    if (e > 0) return Rational(0);
    return std::nullopt;
  }
  if (base < 0) return std::nullopt;
  if (base == 1) return Rational(1);
  if (!mpz_fits_ulong_p(e.get_den_mpz_t())) return std::nullopt;
  unsigned long k = mpz_get_ui(e.get_den_mpz_t());
  mpz_class rn, rd;
  if (!exact_root(mpz_class(base.get_num()), k, rn)) return std::nullopt;
  if (!exact_root(mpz_class(base.get_den()), k, rd)) return std::nullopt;
  return rational_power(Rational(rn, rd), Rational(e.get_num()));
}

// coefficient * term, where term carries no numeric coefficient.
std::pair<Rational, Expr> split_coefficient(const Expr& t) {
  if (t.kind() == Kind::Product && t.args()[0].is_constant()) {
    auto a = t.args();
    if (a.size() == 2) return {a[0].value(), a[1]};
    return {a[0].value(),
            NodeFactory::composite(Kind::Product,
                                   std::vector<Expr>(a.begin() + 1, a.end()))};
  }
  return {Rational(1), t};
}

Expr scale_term(const Rational& c, const Expr& t);

// s = c * s' where the leading term of s' has coefficient 1.
std::pair<Rational, Expr> split_content(const Expr& s) {
  // The constant term if present, else the term whose monomial sorts first;
  // both choices are invariant under rescaling.
  Rational c;
  if (s.args()[0].is_constant()) {
    c = s.args()[0].value();
  } else {
    std::optional<Expr> best;
    for (const auto& t : s.args()) {
      auto [tc, rest] = split_coefficient(t);
      if (!best || compare(rest, *best) < 0) {
        best = rest;
        c = tc;
      }
    }
  }
  if (c == 1) return {c, s};
  std::vector<Expr> terms;
  terms.reserve(s.args().size());
  for (const auto& t : s.args()) {
    if (t.is_constant()) {
      terms.push_back(Expr(Rational(t.value() / c)));
    } else {
      auto [tc, rest] = split_coefficient(t);
      terms.push_back(scale_term(tc / c, rest));
    }
  }
  const auto first = terms.begin() + (terms[0].is_constant() ? 1 : 0);
  std::sort(first, terms.end(), ExprLess{});
  return {c, NodeFactory::composite(Kind::Sum, std::move(terms))};
}

Expr scale_term(const Rational& c, const Expr& t) {
  if (c == 1) return t;
  std::vector<Expr> args;
  args.push_back(Expr(c));
  if (t.kind() == Kind::Product) {
    args.insert(args.end(), t.args().begin(), t.args().end());
  } else {
    args.push_back(t);
  }
  return NodeFactory::composite(Kind::Product, std::move(args));
}

}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}
Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}
Expr::Expr(const Rational& value) : node_(NodeFactory::constant(value).node_) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::variable(std::string_view name) {
  return NodeFactory::symbol(Kind::Variable, name);
}
Expr Expr::parameter(std::string_view name) {
  return NodeFactory::symbol(Kind::Parameter, name);
}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
long double Expr::approx() const { return node_->approx; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::args() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }
std::uint64_t Expr::symbol_mask() const { return node_->mask; }

bool Expr::is_zero() const { return is_constant() && sgn(value()) == 0; }
bool Expr::is_one() const { return is_constant() && value() == 1; }
bool Expr::is_integer() const {
  return is_constant() && is_integer_value(value());
}
bool Expr::is_negative_constant() const {
  return is_constant() && sgn(value()) < 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Kind::Parameter:
    case Kind::Variable: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default: {
      auto aa = a.args();
      auto bb = b.args();
      if (aa.size() != bb.size()) return aa.size() < bb.size() ? -1 : 1;
      for (std::size_t i = 0; i < aa.size(); ++i) {
        int c = compare(aa[i], bb[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

Rational rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Expr add(std::vector<Expr> terms) {
  Rational constant(0);
  std::map<Expr, Rational, ExprLess> collected;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Expr t = terms[i];
    switch (t.kind()) {
      case Kind::Constant:
        constant += t.value();
        break;
      case Kind::Sum:
        for (const auto& a : t.args()) terms.push_back(a);
        break;
      default: {
        auto [c, rest] = split_coefficient(t);
        collected[rest] += c;
      }
    }
  }
  std::vector<Expr> out;
  out.reserve(collected.size() + 1);
  for (const auto& [t, c] : collected) {
    if (sgn(c) == 0) continue;
    out.push_back(scale_term(c, t));
  }
  std::sort(out.begin(), out.end(), ExprLess{});
  if (sgn(constant) != 0) out.insert(out.begin(), Expr(constant));
  if (out.empty()) return Expr(constant);
  if (out.size() == 1) return out[0];
  return NodeFactory::composite(Kind::Sum, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
  Rational coefficient(1);
  std::map<Expr, std::vector<Expr>, ExprLess> powers;
  std::vector<Expr> exp_args;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Expr f = factors[i];
    switch (f.kind()) {
      case Kind::Constant:
        coefficient *= f.value();
        if (sgn(coefficient) == 0) return zero_expr();
        break;
      case Kind::Product:
        for (const auto& a : f.args()) factors.push_back(a);
        break;
      case Kind::Exp:
        exp_args.push_back(f.args()[0]);
        break;
      case Kind::Power:
        powers[f.base()].push_back(f.exponent());
        break;
      case Kind::Sum: {
        auto [c, rest] = split_content(f);
        coefficient *= c;
        powers[rest].push_back(one_expr());
        break;
      }
      default:
        powers[f].push_back(one_expr());
    }
  }

  std::vector<Expr> out;
  std::vector<Expr> redo;
  for (auto& [base, exps] : powers) {
    Expr p = pow(base, add(std::move(exps)));
    switch (p.kind()) {
      case Kind::Constant:
        coefficient *= p.value();
        if (sgn(coefficient) == 0) return zero_expr();
        break;
      case Kind::Product:
      case Kind::Exp:
        redo.push_back(p);
        break;
      default:
        out.push_back(p);
    }
  }
  if (!exp_args.empty()) {
    Expr e = exp(add(std::move(exp_args)));
    if (e.is_constant()) {
      coefficient *= e.value();
    } else if (e.kind() == Kind::Exp) {
      out.push_back(e);
    } else {
      redo.push_back(e);
    }
  }
  if (!redo.empty()) {
    redo.insert(redo.end(), out.begin(), out.end());
    redo.push_back(Expr(coefficient));
    return mul(std::move(redo));
  }

  std::sort(out.begin(), out.end(), ExprLess{});
  if (out.empty()) return Expr(coefficient);
  if (out.size() == 1) {
    if (coefficient == 1) return out[0];
    if (out[0].kind() == Kind::Sum) {
      std::vector<Expr> scaled;
      scaled.reserve(out[0].args().size());
      for (const auto& t : out[0].args()) scaled.push_back(mul({Expr(coefficient), t}));
      return add(std::move(scaled));
    }
  }
  if (coefficient != 1) out.insert(out.begin(), Expr(coefficient));
  return NodeFactory::composite(Kind::Product, std::move(out));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant()) {
    const Rational& q = exponent.value();
    if (sgn(q) == 0) return one_expr();
    if (q == 1) return base;
    if (base.is_constant()) {
      if (auto r = rational_power(base.value(), q)) return Expr(*r);
      return NodeFactory::composite(Kind::Power, {base, exponent});
    }
    if (is_integer_value(q)) {
      switch (base.kind()) {
        case Kind::Sum: {
          auto [c, rest] = split_content(base);
          if (c == 1) break;
          return mul({Expr(*rational_power(c, q)), pow(rest, exponent)});
        }
        case Kind::Power:
          return pow(base.base(), mul({base.exponent(), exponent}));
        case Kind::Product: {
          std::vector<Expr> fs;
          for (const auto& f : base.args()) fs.push_back(pow(f, exponent));
          return mul(std::move(fs));
        }
        case Kind::Exp:
          return exp(mul({base.args()[0], exponent}));
        default:
          break;
      }
    }
  }
  if (base.is_one()) return one_expr();
  return NodeFactory::composite(Kind::Power, {base, exponent});
}

Expr exp(const Expr& arg) {
  if (arg.is_zero()) return one_expr();
  if (arg.kind() == Kind::Log) return arg.args()[0];
  return NodeFactory::composite(Kind::Exp, {arg});
}

Expr log(const Expr& arg) {
  if (arg.is_one()) return zero_expr();
  return NodeFactory::composite(Kind::Log, {arg});
}

Expr sqrt(const Expr& arg) { return pow(arg, Expr(rational(1, 2))); }

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
  return add({a, mul({Expr(-1), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  return mul({a, pow(b, Expr(-1))});
}
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

namespace {

class Differentiator {
 public:
  explicit Differentiator(std::string_view var) : var_(var), bit_(name_bit(var)) {}

  Expr operator()(const Expr& e) {
    if ((e.symbol_mask() & bit_) == 0) return zero_expr();
    if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second;
    Expr d = compute(e);
    cache_.emplace(e.node(), d);
    return d;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Constant:
        return zero_expr();
      case Kind::Parameter:
      case Kind::Variable:
        return e.name() == var_ ? one_expr() : zero_expr();
      case Kind::Sum: {
        std::vector<Expr> ts;
        for (const auto& a : e.args()) ts.push_back((*this)(a));
        return add(std::move(ts));
      }
      case Kind::Product: {
        auto a = e.args();
        std::vector<Expr> ts;
        for (std::size_t i = 0; i < a.size(); ++i) {
          Expr di = (*this)(a[i]);
          if (di.is_zero()) continue;
          std::vector<Expr> fs;
          for (std::size_t j = 0; j < a.size(); ++j) {
            if (j != i) fs.push_back(a[j]);
          }
          fs.push_back(di);
          ts.push_back(mul(std::move(fs)));
        }
        return add(std::move(ts));
      }
      case Kind::Power: {
        const Expr& b = e.base();
        const Expr& x = e.exponent();
        Expr db = (*this)(b);
        Expr dx = (*this)(x);
        if (dx.is_zero()) {
          return mul({x, pow(b, add({x, Expr(-1)})), db});
        }
        return mul({e, add({mul({dx, log(b)}), mul({x, db, pow(b, Expr(-1))})})});
      }
      case Kind::Exp:
        return mul({e, (*this)(e.args()[0])});
      case Kind::Log:
        return mul({(*this)(e.args()[0]), pow(e.args()[0], Expr(-1))});
    }
    return zero_expr();
  }

  std::string var_;
  std::uint64_t bit_;
  std::unordered_map<const Node*, Expr> cache_;
};

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  switch (e.kind()) {
    case Kind::Sum:
      return add(std::move(args));
    case Kind::Product:
      return mul(std::move(args));
    case Kind::Power:
      return pow(args[0], args[1]);
    case Kind::Exp:
      return exp(args[0]);
    case Kind::Log:
      return log(args[0]);
    default:
      return e;
  }
}

class Rewriter {
 public:
  using Leaf = std::function<std::optional<Expr>(const Expr&)>;
  Rewriter(Leaf leaf, std::uint64_t mask) : leaf_(std::move(leaf)), mask_(mask) {}

  Expr operator()(const Expr& e) {
    if ((e.symbol_mask() & mask_) == 0 && !e.is_symbol()) {
      if (mask_ != ~std::uint64_t{0}) return e;
    }
    if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second;
    Expr out = e;
    if (e.is_symbol()) {
      if (auto r = leaf_(e)) out = *r;
    } else if (!e.is_constant()) {
      std::vector<Expr> args;
      args.reserve(e.args().size());
      for (const auto& a : e.args()) args.push_back((*this)(a));
      out = rebuild(e, std::move(args));
    }
    cache_.emplace(e.node(), out);
    return out;
  }

 private:
  Leaf leaf_;
  std::uint64_t mask_;
  std::unordered_map<const Node*, Expr> cache_;
};

}  // namespace

Expr diff(const Expr& e, std::string_view var) {
  Differentiator d(var);
  return d(e);
}

Expr diff(const Expr& e, const Expr& var) { return diff(e, var.name()); }

Expr simplify(const Expr& e) {
  Rewriter r([](const Expr&) { return std::optional<Expr>{}; }, ~std::uint64_t{0});
  return r(e);
}

Expr subst(const Expr& e, const Bindings& bindings) {
  if (bindings.empty()) return e;
  std::uint64_t mask = 0;
  for (const auto& [name, _] : bindings) mask |= name_bit(name);
  Rewriter r(
      [&](const Expr& s) -> std::optional<Expr> {
        if (auto it = bindings.find(s.name()); it != bindings.end()) return it->second;
        return std::nullopt;
      },
      mask);
  return r(e);
}

bool depends_on(const Expr& e, std::string_view symbol) {
  if ((e.symbol_mask() & name_bit(symbol)) == 0) return false;
  if (e.is_symbol()) return e.name() == symbol;
  for (const auto& a : e.args()) {
    if (depends_on(a, symbol)) return true;
  }
  return false;
}

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out,
                     std::unordered_map<const Node*, bool>& seen) {
  if (!seen.emplace(e.node(), true).second) return;
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out, seen);
}
}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  std::unordered_map<const Node*, bool> seen;
  collect_symbols(e, out, seen);
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

// Printing.  Precedence levels: 1 sum / leading sign, 2 product,
// 3 power, 4 atom.
namespace {

struct Printed {
  std::string text;
  int prec;
};

Printed print(const Expr& e);

std::string wrap(const Printed& p, int min_prec) {
  if (p.prec < min_prec) return "(" + p.text + ")";
  return p.text;
}

Printed print_constant(const Rational& q) {
  std::string s = q.get_str();
  if (sgn(q) < 0) return {s, 1};
  if (!is_integer_value(q)) return {s, 2};
  return {s, 4};
}

Printed print_product(const Expr& e) {
  Rational coefficient(1);
  std::vector<std::string> num, den;
  for (const auto& f : e.args()) {
    if (f.is_constant()) {
      coefficient = f.value();
    } else if (f.kind() == Kind::Power && f.exponent().is_negative_constant()) {
      Expr inv = pow(f.base(), Expr(Rational(-f.exponent().value())));
      den.push_back(wrap(print(inv), 3));
    } else {
      num.push_back(wrap(print(f), 3));
    }
  }
  std::string body;
  Rational mag = abs(coefficient);
  if (mag != 1 || num.empty()) {
    body = mag.get_str();
  }
  for (const auto& n : num) {
    if (!body.empty()) body += "*";
    body += n;
  }
  for (const auto& d : den) body += "/" + d;
  if (sgn(coefficient) < 0) return {"-" + body, 1};
  return {body, 2};
}

Printed print(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
      return print_constant(e.value());
    case Kind::Parameter:
    case Kind::Variable:
      return {e.name(), 4};
    case Kind::Sum: {
      std::string s;
      bool first = true;
      for (const auto& t : e.args()) {
        auto [c, rest] = split_coefficient(t);
        bool negative = t.is_negative_constant() || sgn(c) < 0;
        if (first) {
          s = print(t).text;
          first = false;
        } else if (negative) {
          Expr pos = mul({Expr(-1), t});
          s += " - " + wrap(print(pos), 2);
        } else {
          s += " + " + wrap(print(t), 2);
        }
      }
      return {s, 1};
    }
    case Kind::Product:
      return print_product(e);
    case Kind::Power:
      if (e.exponent().is_negative_constant()) {
        Expr inv = pow(e.base(), Expr(Rational(-e.exponent().value())));
        return {"1/" + wrap(print(inv), 3), 2};
      }
      return {wrap(print(e.base()), 4) + "^" + wrap(print(e.exponent()), 4), 3};
    case Kind::Exp:
      return {"exp(" + print(e.args()[0]).text + ")", 4};
    case Kind::Log:
      return {"ln(" + print(e.args()[0]).text + ")", 4};
  }
  return {"?", 4};
}

}  // namespace

std::string Expr::str() const { return print(*this).text; }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

}  // namespace monge::sym
