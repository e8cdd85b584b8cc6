#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monge/jet.hpp"

namespace monge::catalog {

using jet::VectorField;
using sym::Expr;
using sym::Rational;

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MongeModel {
  std::string name;    // fiber label, e.g. "P[2]"
  std::string family;  // "Pm", "Qab", "N12", ...
  std::string equation;
  int n = 2;
  Expr f;
  jet::Chart chart;
  std::map<std::string, Rational> params;
  std::vector<VectorField> symmetries;  // the listed basis
  std::vector<VectorField> derived;     // extra named combinations (W6')

  jet::Distribution distribution() const { return jet::monge_distribution(f, n); }
  // Looks in symmetries, then derived.  Throws std::out_of_range.
  const VectorField& field(std::string_view name) const;
};

// y' = (z'')^m; m in {0, 1} is rejected as a linear model.
MongeModel model_Pm(const Rational& m);
// P_m with a formal parameter m (general-m formulas).
MongeModel model_Pm_symbolic();
// y' = (z'')^2 + r1 (z')^2 + r2 z^2, no symmetry list.
MongeModel model_Q(const Rational& r1, const Rational& r2);
// r1 = a^2 + b^2, r2 = a^2 b^2 with the xi-field basis.  Rejects a = +-b,
// ab = 0 and the G2 ratios a:b = +-3^{+-1}.
MongeModel model_Qab(const Rational& a, const Rational& b);
MongeModel model_N12();
MongeModel model_ln();
MongeModel model_NS();
MongeModel model_exp();
// (a, b) = (1/2, m - 1/2); the symmetry list is attached when that pair is
// admissible for model_Qab.
MongeModel model_Qnm(const Rational& m);
// y' = (z^(n))^2 + r1 (z^(n-1))^2 + ... + rn z^2
MongeModel model_higher(int n, const std::vector<Rational>& coeffs);

// xi(a, b) = e^{bx} (d/dz + b d/dz1 + b^2 d/dz2 + 2b(a^2 z + b z1) d/dy)
VectorField xi_field(const Rational& a, const Rational& b, std::string name);

// The 5D catalog used by the symmetry and growth suites.
std::vector<MongeModel> submaximal_models();

struct ModelSpec {
  std::string name;  // Pm, Q, Qab, N12, ln, NS, exp, Qnm, higher, or a .json path
  std::optional<Rational> m, a, b, r1, r2;
  std::optional<int> n;
  std::vector<Rational> coeffs;
};
MongeModel model_from_spec(const ModelSpec& spec);

// {"name", "n", "rhs", "params": {sym: value}, "symmetries": [[comp, ...] or
// {"name", "components"}]}
MongeModel load_model_json(const std::string& text);
MongeModel load_model_file(const std::string& path);

}  // namespace monge::catalog
