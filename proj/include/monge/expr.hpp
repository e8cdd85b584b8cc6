#pragma once

// Immutable symbolic expressions over jet variables and formal parameters.
//
// The node algebra is deliberately small: rational constants, symbols,
// n-ary sums and products, power, exp and ln.  Subtraction is a product
// with -1 and division is a power with exponent -1.  Every constructor
// returns a canonical form (flattened, like terms collected, constants
// folded), so structurally equal expressions compare equal.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace monge::sym {

using Rational = mpq_class;

enum class Kind : std::uint8_t {
  Constant,
  Parameter,
  Variable,
  Sum,
  Product,
  Power,
  Exp,
  Log,
};

struct Node;

class Expr {
 public:
  Expr();  // the constant 0
  Expr(int value);
  Expr(long value);
  Expr(const Rational& value);

  static Expr variable(std::string_view name);
  static Expr parameter(std::string_view name);

  Kind kind() const;
  const Rational& value() const;  // Constant only
  long double approx() const;      // Constant only
  const std::string& name() const;  // Parameter / Variable only
  std::span<const Expr> args() const;
  std::size_t hash() const;
  // Bloom mask of the symbol names occurring in the expression.
  std::uint64_t symbol_mask() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_symbol() const {
    return kind() == Kind::Parameter || kind() == Kind::Variable;
  }
  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;  // integer constant
  bool is_negative_constant() const;

  // Power node accessors.
  const Expr& base() const { return args()[0]; }
  const Expr& exponent() const { return args()[1]; }

  std::string str() const;

  const Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend struct NodeFactory;
};

// Total structural order; used for canonical argument ordering.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const {
    return compare(a, b) < 0;
  }
};

Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& arg);
Expr log(const Expr& arg);
Expr sqrt(const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Rational rational(long num, long den = 1);

// Partial derivative with respect to any symbol.
Expr diff(const Expr& e, const Expr& var);
Expr diff(const Expr& e, std::string_view var);

// Best-effort canonicalization; rebuilds every node through the canonical
// constructors.  Not a decision procedure for zero.
Expr simplify(const Expr& e);

using Bindings = std::map<std::string, Expr, std::less<>>;

// Simultaneous substitution of symbols by expressions.
Expr subst(const Expr& e, const Bindings& bindings);

bool depends_on(const Expr& e, std::string_view symbol);
std::set<std::string> free_symbols(const Expr& e);
std::size_t node_count(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace monge::sym
