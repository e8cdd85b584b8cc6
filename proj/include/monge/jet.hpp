#pragma once

// Jet charts, vector fields and Monge distributions.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monge/eval.hpp"
#include "monge/expr.hpp"
#include "monge/zero_test.hpp"

namespace monge::jet {

using sym::Complex;
using sym::Expr;

struct Chart {
  std::vector<std::string> vars;

  // (x, y, z, z1, ..., zn)
  static Chart monge(int n);
  std::size_t dim() const { return vars.size(); }
  int index_of(std::string_view name) const;  // -1 if absent
  Expr var(std::size_t i) const { return Expr::variable(vars[i]); }
  bool operator==(const Chart& o) const { return vars == o.vars; }
};

class ChartMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VectorField {
  Chart chart;
  std::vector<Expr> comps;
  std::string name;

  static VectorField zero(const Chart& c, std::string name = "0");
  // Coordinate field d/d(var).
  static VectorField coordinate(const Chart& c, std::string_view var);
  static VectorField from(const Chart& c, std::vector<Expr> comps, std::string name = "");

  Expr apply(const Expr& g) const;  // V(g)
  std::vector<Complex> at(const sym::EvalContext& ctx) const;
  bool is_zero() const;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& c, const VectorField& v);

// [V, W] = V(W) - W(V), componentwise.
VectorField lie_bracket(const VectorField& v, const VectorField& w);

struct MongeData {
  Expr f;
  int n = 2;
};

struct Distribution {
  Chart chart;
  std::vector<VectorField> span;
  std::optional<MongeData> monge;

  // Pfaffian forms as coefficient rows in chart order:
  // dy - f dx, dz - z1 dx, dz_i - z_{i+1} dx.
  std::vector<std::vector<Expr>> annihilators() const;
};

// X1 = d/dx + f d/dy + z1 d/dz + sum z_{i+1} d/dz_i,  X2 = d/dz_n.
Distribution monge_distribution(const Expr& f, int n);

// Numerical rank of column vectors via singular values relative to the
// largest one.
int numeric_rank(const std::vector<std::vector<Complex>>& columns, double rel_tol);

struct GrowthResult {
  std::vector<int> dims;
  bool stable = true;  // rank agrees at tol and 10*tol everywhere
};

// Weak derived flag D^{i+1} = D^i + [D^1, D^i] evaluated at a point.
// Stops at full rank or when the dimension repeats (the repeat is kept).
GrowthResult growth_vector(const Distribution& d, const sym::EvalContext& point,
                           double rel_tol = 1e-8);

struct SymmetryResult {
  bool ok = false;
  double residual = 0;  // max relative annihilator contraction of [V, X_i]
  int max_rank = 0;     // max rank of [X1 | X2 | [V, X_i]]
  int samples = 0;
};

SymmetryResult is_symmetry(const VectorField& v, const Distribution& d,
                           const sym::ZeroTestConfig& cfg);

class TotalDerivative {
 public:
  TotalDerivative(Expr f, int n) : f_(std::move(f)), n_(n) {}
  // dg/dx + f dg/dy + z1 dg/dz + ... + z_{n+1} dg/dz_n
  Expr operator()(const Expr& g) const;
  // The same operator without the z_{n+1} term.
  Expr truncated(const Expr& g) const;
  int order() const { return n_; }
  const Expr& rhs() const { return f_; }
  std::string top_var() const { return "z" + std::to_string(n_); }
  std::string spare_var() const { return "z" + std::to_string(n_ + 1); }

 private:
  Expr f_;
  int n_;
};

TotalDerivative total_derivative(const Expr& f, int n);

}  // namespace monge::jet
