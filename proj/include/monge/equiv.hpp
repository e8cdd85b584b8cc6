#pragma once

// Equivalence transformations between catalog models, jet prolongation of
// base maps and the dihedral identity suite.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "monge/catalog.hpp"
#include "monge/point_map.hpp"

namespace monge::equiv {

using catalog::MongeModel;
using jet::PointMap;
using sym::Expr;
using sym::Rational;

class MapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ta, Tb, Tzeta, Psi, PsiHalf, PsiBar, Phi, Upsilon, Tcomp, Id.  PsiHalf is Psi with
// z^2 coefficient -1/2(m^2-2m+3/4), which is not an equivalence.  Maps on
// P_m need `m`; the others ignore it.  For 2m - 1 < 0, Tb is the real branch
// with sqrt(1 - 2m).
PointMap builtin(const std::string& name, const std::optional<Rational>& m = std::nullopt);
std::vector<std::string> builtin_names();

struct ModelPair {
  MongeModel source, target;
};
ModelPair builtin_models(const std::string& name, const std::optional<Rational>& m = std::nullopt);

class ProlongError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Prolongation {
  PointMap map;  // (psi, phi_y, phi, zbar_1, ..., zbar_n)
  Expr ybar1;    // D(phi_y) / D(psi)
};

// Restores the jet components of a base map (xbar, ybar, zbar) =
// (psi, phi_y, phi) by total-derivative quotients.  Throws ProlongError
// ("z3 does not cancel") when the spare jet variable survives.
Prolongation prolong(const Expr& psi, const Expr& phi, const Expr& phi_y, const Expr& f, int n,
                     const sym::ZeroTestConfig& cfg = {});

struct EquivalenceReport {
  bool ok = false;
  jet::PushforwardReport pushforward;
  double ybar1_residual = 0;  // D(T_y) - fbar(T) D(T_x)
  int samples = 0;
};
EquivalenceReport check_equivalence(const PointMap& t, const MongeModel& src,
                                    const MongeModel& tgt, const sym::ZeroTestConfig& cfg);

// T_{w_1} ... T_{w_k} over the fiber P[m]; the rightmost letter acts first.
PointMap word_map(std::string_view word, const Rational& m);

struct IdentityResult {
  std::string name;  // e.g. "aa = e"
  bool ok = false;
  double residual = 0;
  std::string detail;
};

struct DihedralReport {
  Rational m;
  std::vector<IdentityResult> identities;
  bool ok() const;
};
DihedralReport dihedral_suite(const Rational& m, const sym::ZeroTestConfig& cfg);

// Solves Upsilon(w) = target by damped Newton iteration.
std::optional<std::vector<sym::Complex>> upsilon_inverse(const std::vector<sym::Complex>& target);

struct CompositeReport {
  double residual = 0;  // max componentwise |a - b| / (1 + |b|)
  int samples = 0;
  int newton_failures = 0;
};
// Upsilon^{-1} o PsiBar against the closed-form Tcomp at sample points of N12.
CompositeReport composite_check(const sym::ZeroTestConfig& cfg);

}  // namespace monge::equiv
