#pragma once

// Structure of finite-dimensional algebras of vector fields: structure
// constants, derived series, gradings, adjoint Jordan analysis, frame
// decompositions and the scalar invariants J and I^2.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monge/exact_linalg.hpp"
#include "monge/jet.hpp"

namespace monge::lie {

using jet::VectorField;
using linalg::QMatrix;
using sym::Expr;
using sym::Rational;

class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LieAlgebraData {
  std::vector<VectorField> basis;
  std::size_t dim() const { return basis.size(); }
  bool exact = false;
  // c[i][j][k]: [X_i, X_j] = sum_k c^k_ij X_k
  std::vector<std::vector<std::vector<Rational>>> c;
  std::vector<std::vector<std::vector<double>>> c_float;
  double residual = 0;  // re-expansion residual at float control points
  int exact_points = 0;

  int index_of(std::string_view name) const;  // -1 if absent
  // Coefficient vector of [u, v] for coefficient vectors u, v (exact only).
  std::vector<Rational> bracket(const std::vector<Rational>& u, const std::vector<Rational>& v) const;
  std::vector<Rational> unit(std::size_t i) const;
  // "[W1,W5] = W3" lines for the nonzero brackets.
  std::vector<std::string> table() const;
};

// Solves [X_i, X_j] = sum_k c^k_ij X_k for constants.  Uses exact rational
// sample points when every component evaluates rationally there, else a
// least-squares float solve.  Throws StructureError("fields dependent") or
// ("coefficients not constant").
LieAlgebraData structure_constants(const std::vector<VectorField>& fields,
                                   const sym::ZeroTestConfig& cfg = {});

// Dimensions of g, [g, g], [[g, g], [g, g]], ... ending at 0 or at the
// first repeated dimension (kept).
std::vector<int> derived_series(const LieAlgebraData& alg);
bool is_solvable(const LieAlgebraData& alg);

// Matrix of ad(element) on span{basis[i] : i in subspace}, columns are
// images.  Throws StructureError when the subspace is not invariant.
QMatrix ad_restricted(const LieAlgebraData& alg, const std::vector<Rational>& element,
                      const std::vector<int>& subspace);

struct GradingReport {
  bool ok = false;
  std::vector<std::string> failures;
  int heisenberg_form_rank = 0;  // rank of the bracket form on degree -1
};
// labels: basis index -> degree.  Checks ad(g) = k id on each degree,
// [h_-1, h_-1] in h_-2 with a one-dimensional h_-2 and a nondegenerate form.
GradingReport grading_check(const LieAlgebraData& alg, int grading_element,
                            const std::map<int, int>& labels);

// Coefficients c with field = sum c_i frame_i, by symbolic elimination.
// Throws StructureError("singular frame").
std::vector<Expr> frame_decompose(const VectorField& field, const std::vector<VectorField>& frame,
                                  const sym::ZeroTestConfig& cfg = {});

// Value in R u {infinity}; infinity carries the G2 flag.
struct ExtendedReal {
  bool infinite = false;
  Rational value;
  bool g2 = false;
  bool pole = false;  // formula has no value (r1 = 0)
  std::string str() const;
};

Rational invariant_J(const Rational& m);
ExtendedReal invariant_I2_k(const Rational& k);
ExtendedReal invariant_I2_q(const Rational& r1, const Rational& r2);

struct InvariantRecord {
  Rational m, k, J;
  ExtendedReal I2;
  Rational consistency;  // 25 J - 9 (1 + 1/I^2); 1/infinity = 0
  bool consistency_defined = true;  // false when I^2 = 0
  bool g2 = false;
};
InvariantRecord invariant_record(const Rational& m);

}  // namespace monge::lie
