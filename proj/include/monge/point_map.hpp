#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monge/jet.hpp"
#include "monge/paramspace.hpp"
#include "monge/zero_test.hpp"

namespace monge::jet {

class FiberMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point transformation between model charts.  Fibers label the model on
// each side (e.g. "P[2]" -> "P[-1]"); maps only compose when they agree.
struct PointMap {
  std::string name;
  Chart source, target;
  std::vector<Expr> comps;  // target coordinates as functions of source ones
  std::string source_fiber, target_fiber;
  std::optional<param::Dih4> lift;
  std::vector<std::string> domain_notes;

  // Throws sym::DomainError at singular points.
  std::vector<Complex> apply(const std::vector<Complex>& point) const;
  std::optional<std::vector<sym::Rational>> apply_exact(const std::vector<sym::Rational>& point) const;
};

PointMap identity_map(const Chart& c, const std::string& fiber);

// f after g.
PointMap compose(const PointMap& f, const PointMap& g);

struct PushforwardReport {
  bool ok = false;
  double residual = 0;
  bool jacobian_ok = true;
  int samples = 0;
  int domain_failures = 0;
};

// For each spanning X of src and each annihilator of tgt, checks
// theta(T(p))(J_T X(p)) = 0 at sample points.
PushforwardReport pushforward_check(const PointMap& t, const Distribution& src,
                                    const Distribution& tgt, const sym::ZeroTestConfig& cfg);

struct MapDistance {
  double residual = 0;
  int samples = 0;
};

// Extensional comparison: max relative residual of componentwise
// differences at sample points.
MapDistance map_distance(const PointMap& a, const PointMap& b, const sym::ZeroTestConfig& cfg);

}  // namespace monge::jet
