#include "monge/lie.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "monge/paramspace.hpp"

namespace monge::lie {

using sym::Complex;

int LieAlgebraData::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<Rational> LieAlgebraData::unit(std::size_t i) const {
  std::vector<Rational> u(dim());
  u[i] = 1;
  return u;
}

std::vector<Rational> LieAlgebraData::bracket(const std::vector<Rational>& u,
                                              const std::vector<Rational>& v) const {
  if (!exact) throw StructureError("exact structure constants required");
  std::vector<Rational> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sgn(u[i]) == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (sgn(v[j]) == 0) continue;
      const Rational w = u[i] * v[j];
      for (std::size_t k = 0; k < dim(); ++k) out[k] += w * c[i][j][k];
    }
  }
  return out;
}

std::vector<std::string> LieAlgebraData::table() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = i + 1; j < dim(); ++j) {
      std::string rhs;
      for (std::size_t k = 0; k < dim(); ++k) {
        std::string coef;
        if (exact) {
          const Rational& q = c[i][j][k];
          if (sgn(q) == 0) continue;
          if (q == 1) coef = rhs.empty() ? "" : " + ";
          else if (q == -1) coef = rhs.empty() ? "-" : " - ";
          else if (sgn(q) < 0) coef = (rhs.empty() ? "-" : " - ") + param::format_rational(-q) + " ";
          else coef = (rhs.empty() ? "" : " + ") + param::format_rational(q) + " ";
        } else {
          const double q = c_float[i][j][k];
          if (std::abs(q) < 1e-12) continue;
          coef = (rhs.empty() ? "" : " + ") + std::to_string(q) + " ";
        }
        rhs += coef + basis[k].name;
      }
      if (!rhs.empty()) out.push_back("[" + basis[i].name + "," + basis[j].name + "] = " + rhs);
    }
  }
  return out;
}

namespace {

struct ExactPoints {
  linalg::QMatrix a;                            // stacked field values
  std::vector<std::vector<Rational>> rhs;       // per pair (i<j)
  int points = 0;
};

Rational random_rational(std::mt19937_64& rng) {
  static const long nums[] = {-3, -2, -1, 0, 1, 2, 3, 5};
  static const long dens[] = {1, 1, 2, 3};
  return Rational(nums[rng() % 8], dens[rng() % 4]);
}

std::optional<ExactPoints> exact_system(const std::vector<VectorField>& fields,
                                        const std::vector<VectorField>& brackets,
                                        std::uint64_t seed) {
  const auto& chart = fields.front().chart;
  const std::size_t dim = chart.dim();
  const std::size_t n = fields.size();
  const std::string top = chart.vars.back();
  // Fourth powers keep z2^(p/4) rational; 0 and 1 make exp and ln exact.
  static const Rational top_pool[] = {1, 16, 81, Rational(1, 16), Rational(1, 81), 0, 4, 9};
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Rational>> rows;
  std::vector<std::vector<std::vector<Rational>>> rhs_rows(brackets.size());
  int points = 0;
  std::size_t current_rank = 0;
  int after_full = 0;
  for (int attempt = 0; attempt < 600 && after_full < 2; ++attempt) {
    sym::ExactContext ctx;
    for (const auto& v : chart.vars) {
      if (v == top) ctx[v] = top_pool[rng() % 8];
      else if (v == "x" && rng() % 2 == 0) ctx[v] = 0;
      else ctx[v] = random_rational(rng);
    }
    std::vector<std::vector<Rational>> frows(dim, std::vector<Rational>(n));
    std::vector<std::vector<Rational>> brows(brackets.size(), std::vector<Rational>(dim));
    bool ok = true;
    try {
      for (std::size_t j = 0; j < n && ok; ++j) {
        for (std::size_t r = 0; r < dim && ok; ++r) {
          auto v = sym::eval_exact(fields[j].comps[r], ctx);
          if (!v) ok = false;
          else frows[r][j] = *v;
        }
      }
      for (std::size_t b = 0; b < brackets.size() && ok; ++b) {
        for (std::size_t r = 0; r < dim && ok; ++r) {
          auto v = sym::eval_exact(brackets[b].comps[r], ctx);
          if (!v) ok = false;
          else brows[b][r] = *v;
        }
      }
    } catch (const sym::DomainError&) {
      ok = false;
    }
    if (!ok) continue;
    for (auto& r : frows) rows.push_back(std::move(r));
    for (std::size_t b = 0; b < brackets.size(); ++b) {
      for (auto& v : brows[b]) rhs_rows[b].push_back({v});
    }
    ++points;
    linalg::QMatrix a(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    current_rank = linalg::rank(a);
    if (current_rank == n) ++after_full;
  }
  if (current_rank < n) return std::nullopt;
  ExactPoints out;
  out.points = points;
  out.a = linalg::QMatrix(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) out.a(i, j) = rows[i][j];
  }
  for (const auto& br : rhs_rows) {
    std::vector<Rational> col;
    for (const auto& v : br) col.push_back(v[0]);
    out.rhs.push_back(std::move(col));
  }
  return out;
}

}  // namespace

LieAlgebraData structure_constants(const std::vector<VectorField>& fields,
                                   const sym::ZeroTestConfig& cfg) {
  if (fields.empty()) throw StructureError("no fields");
  const auto& chart = fields.front().chart;
  const std::size_t n = fields.size();
  const std::size_t dim = chart.dim();
  LieAlgebraData alg;
  alg.basis = fields;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<VectorField> brackets;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(i, j);
      brackets.push_back(jet::lie_bracket(fields[i], fields[j]));
    }
  }

  std::vector<Expr> all;
  for (const auto& f : fields) all.insert(all.end(), f.comps.begin(), f.comps.end());
  for (const auto& b : brackets) all.insert(all.end(), b.comps.begin(), b.comps.end());
  const auto symbols = sym::free_symbols(all);

  // Float evaluations at control points.
  const int control = std::max<int>(3, static_cast<int>((n + dim - 1) / dim) + 2);
  std::vector<std::vector<std::vector<Complex>>> fvals, bvals;  // point, field, comp
  sym::ZeroTestConfig ccfg = cfg;
  ccfg.samples = control;
  sym::for_each_sample(
      ccfg, symbols,
      [&](const sym::EvalContext& ctx) {
        std::vector<std::vector<Complex>> fv, bv;
        for (const auto& f : fields) fv.push_back(f.at(ctx));
        for (const auto& b : brackets) bv.push_back(b.at(ctx));
        fvals.push_back(std::move(fv));
        bvals.push_back(std::move(bv));
      },
      0x57c7);
  {
    std::vector<std::vector<Complex>> cols(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& pt : fvals) cols[j].insert(cols[j].end(), pt[j].begin(), pt[j].end());
    }
    if (jet::numeric_rank(cols, 1e-9) < static_cast<int>(n)) throw StructureError("fields dependent");
  }

  alg.c.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
  alg.c_float.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));

  if (auto sys = exact_system(fields, brackets, cfg.seed)) {
    alg.exact = true;
    alg.exact_points = sys->points;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      std::optional<std::vector<Rational>> sol;
      try {
        sol = linalg::solve_unique(sys->a, sys->rhs[p]);
      } catch (const std::runtime_error&) {
        throw StructureError("fields dependent");
      }
      if (!sol) throw StructureError("coefficients not constant");
      const auto [i, j] = pairs[p];
      for (std::size_t k = 0; k < n; ++k) {
        alg.c[i][j][k] = (*sol)[k];
        alg.c[j][i][k] = -(*sol)[k];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) alg.c_float[i][j][k] = alg.c[i][j][k].get_d();
      }
    }
  } else {
    const auto rows = static_cast<Eigen::Index>(fvals.size() * dim);
    Eigen::MatrixXcd a(rows, static_cast<Eigen::Index>(n));
    for (std::size_t pt = 0; pt < fvals.size(); ++pt) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < dim; ++r) {
          const Complex& v = fvals[pt][j][r];
          a(static_cast<Eigen::Index>(pt * dim + r), static_cast<Eigen::Index>(j)) = {
              static_cast<double>(v.real()), static_cast<double>(v.imag())};
        }
      }
    }
    auto qr = a.colPivHouseholderQr();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      Eigen::VectorXcd b(rows);
      for (std::size_t pt = 0; pt < bvals.size(); ++pt) {
        for (std::size_t r = 0; r < dim; ++r) {
          const Complex& v = bvals[pt][p][r];
          b(static_cast<Eigen::Index>(pt * dim + r)) = {static_cast<double>(v.real()),
                                                       static_cast<double>(v.imag())};
        }
      }
      const Eigen::VectorXcd x = qr.solve(b);
      const auto [i, j] = pairs[p];
      for (std::size_t k = 0; k < n; ++k) {
        alg.c_float[i][j][k] = x(static_cast<Eigen::Index>(k)).real();
        alg.c_float[j][i][k] = -x(static_cast<Eigen::Index>(k)).real();
      }
    }
  }

  long double worst = 0;
  for (std::size_t pt = 0; pt < fvals.size(); ++pt) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      for (std::size_t r = 0; r < dim; ++r) {
        Complex expand = 0;
        long double mag = std::abs(bvals[pt][p][r]);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex term = static_cast<long double>(alg.c_float[i][j][k]) * fvals[pt][k][r];
          if (alg.exact) {
            expand += sym::to_complex(alg.c[i][j][k]) * fvals[pt][k][r];
          } else {
            expand += term;
          }
          mag = std::max(mag, std::abs(term));
        }
        worst = std::max(worst, std::abs(bvals[pt][p][r] - expand) / (1 + mag));
      }
    }
  }
  alg.residual = static_cast<double>(worst);
  if (alg.residual > std::max(cfg.tol, 1e-9)) throw StructureError("coefficients not constant");
  return alg;
}

std::vector<int> derived_series(const LieAlgebraData& alg) {
  const std::size_t n = alg.dim();
  std::vector<std::vector<Rational>> current;
  for (std::size_t i = 0; i < n; ++i) current.push_back(alg.unit(i));
  std::vector<int> dims{static_cast<int>(n)};
  while (!current.empty()) {
    std::vector<std::vector<Rational>> images;
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) images.push_back(alg.bracket(current[i], current[j]));
    }
    linalg::QMatrix m(images.size(), n);
    for (std::size_t i = 0; i < images.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) m(i, k) = images[i][k];
    }
    linalg::QMatrix basis = images.empty() ? linalg::QMatrix(0, n) : linalg::row_basis(m);
    const int d = static_cast<int>(basis.rows());
    const bool repeat = d == dims.back();
    dims.push_back(d);
    if (repeat) break;
    current.clear();
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      std::vector<Rational> r(n);
      for (std::size_t k = 0; k < n; ++k) r[k] = basis(i, k);
      current.push_back(std::move(r));
    }
  }
  return dims;
}

bool is_solvable(const LieAlgebraData& alg) { return derived_series(alg).back() == 0; }

QMatrix ad_restricted(const LieAlgebraData& alg, const std::vector<Rational>& element,
                      const std::vector<int>& subspace) {
  QMatrix a(subspace.size(), subspace.size());
  for (std::size_t col = 0; col < subspace.size(); ++col) {
    const auto img = alg.bracket(element, alg.unit(static_cast<std::size_t>(subspace[col])));
    for (std::size_t k = 0; k < alg.dim(); ++k) {
      auto pos = std::find(subspace.begin(), subspace.end(), static_cast<int>(k));
      if (pos == subspace.end()) {
        if (sgn(img[k]) != 0) {
          throw StructureError("subspace is not invariant: image of " +
                               alg.basis[static_cast<std::size_t>(subspace[col])].name + " has a " +
                               alg.basis[k].name + " component");
        }
        continue;
      }
      a(static_cast<std::size_t>(pos - subspace.begin()), col) = img[k];
    }
  }
  return a;
}

GradingReport grading_check(const LieAlgebraData& alg, int grading_element,
                            const std::map<int, int>& labels) {
  GradingReport rep;
  const auto g = alg.unit(static_cast<std::size_t>(grading_element));
  const std::string gname = alg.basis[static_cast<std::size_t>(grading_element)].name;
  std::vector<int> minus1, minus2;
  for (const auto& [i, deg] : labels) {
    auto img = alg.bracket(g, alg.unit(static_cast<std::size_t>(i)));
    auto expect = alg.unit(static_cast<std::size_t>(i));
    for (auto& v : expect) v *= deg;
    if (img != expect) {
      rep.failures.push_back("ad(" + gname + ") " + alg.basis[static_cast<std::size_t>(i)].name +
                             " is not " + std::to_string(deg) + " times it");
    }
    if (deg == -1) minus1.push_back(i);
    if (deg == -2) minus2.push_back(i);
  }
  if (minus2.size() != 1) {
    rep.failures.push_back("degree -2 part has dimension " + std::to_string(minus2.size()));
  } else {
    const auto center = static_cast<std::size_t>(minus2[0]);
    QMatrix form(minus1.size(), minus1.size());
    for (std::size_t p = 0; p < minus1.size(); ++p) {
      for (std::size_t q = 0; q < minus1.size(); ++q) {
        auto img = alg.bracket(alg.unit(static_cast<std::size_t>(minus1[p])),
                               alg.unit(static_cast<std::size_t>(minus1[q])));
        for (std::size_t k = 0; k < alg.dim(); ++k) {
          if (k != center && sgn(img[k]) != 0) {
            rep.failures.push_back("[" + alg.basis[static_cast<std::size_t>(minus1[p])].name + "," +
                                   alg.basis[static_cast<std::size_t>(minus1[q])].name +
                                   "] leaves the degree -2 part");
          }
        }
        form(p, q) = img[center];
      }
      auto with_center = alg.bracket(alg.unit(static_cast<std::size_t>(minus1[p])), alg.unit(center));
      if (std::any_of(with_center.begin(), with_center.end(), [](const Rational& v) { return sgn(v) != 0; })) {
        rep.failures.push_back(alg.basis[static_cast<std::size_t>(minus1[p])].name +
                               " does not commute with the center");
      }
    }
    rep.heisenberg_form_rank = static_cast<int>(linalg::rank(form));
    if (rep.heisenberg_form_rank != static_cast<int>(minus1.size())) {
      rep.failures.push_back("bracket form on degree -1 is degenerate");
    }
  }
  rep.ok = rep.failures.empty();
  return rep;
}

std::vector<Expr> frame_decompose(const VectorField& field, const std::vector<VectorField>& frame,
                                  const sym::ZeroTestConfig& cfg) {
  const std::size_t dim = field.chart.dim();
  const std::size_t n = frame.size();
  if (n != dim) throw StructureError("frame must have one field per chart variable");
  std::vector<std::vector<Expr>> m(dim, std::vector<Expr>(n + 1));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t j = 0; j < n; ++j) m[r][j] = frame[j].comps[r];
    m[r][n] = field.comps[r];
  }
  auto nonzero = [&](const Expr& e) { return !e.is_zero() && !sym::is_zero(e, cfg).zero; };
  for (std::size_t col = 0; col < n; ++col) {
    std::optional<std::size_t> pivot;
    for (std::size_t r = col; r < dim; ++r) {
      if (m[r][col].is_constant() && !m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (!pivot) {
      for (std::size_t r = col; r < dim; ++r) {
        if (nonzero(m[r][col])) {
          pivot = r;
          break;
        }
      }
    }
    if (!pivot) throw StructureError("singular frame");
    std::swap(m[col], m[*pivot]);
    const Expr inv = sym::pow(m[col][col], Expr(-1));
    for (std::size_t j = col; j <= n; ++j) m[col][j] = m[col][j] * inv;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const Expr factor = m[r][col];
      for (std::size_t j = col; j <= n; ++j) m[r][j] = m[r][j] - factor * m[col][j];
    }
  }
  std::vector<Expr> coeffs;
  for (std::size_t r = 0; r < dim; ++r) coeffs.push_back(sym::simplify(m[r][n]));
  std::vector<Expr> check;
  for (std::size_t r = 0; r < dim; ++r) {
    std::vector<Expr> terms{-field.comps[r]};
    for (std::size_t j = 0; j < n; ++j) terms.push_back(coeffs[j] * frame[j].comps[r]);
    check.push_back(sym::add(std::move(terms)));
  }
  if (!sym::all_zero(check, cfg).zero) throw StructureError("decomposition does not reconstruct the field");
  return coeffs;
}

std::string ExtendedReal::str() const {
  if (pole) return "formula pole";
  if (infinite) return g2 ? "inf (G2)" : "inf";
  return param::format_rational(value);
}

Rational invariant_J(const Rational& m) {
  const Rational num = (1 - 2 * m) * (1 - 2 * m);
  const Rational d = 1 - 2 * m + 2 * m * m;
  return num / (d * d);
}

ExtendedReal invariant_I2_k(const Rational& k) {
  const Rational k2 = k * k;
  const Rational den = (k2 - 9) * (Rational(1, 9) - k2);
  ExtendedReal out;
  if (sgn(den) == 0) {
    out.infinite = true;
    out.g2 = true;
    return out;
  }
  out.value = (k2 + 1) * (k2 + 1) / den;
  return out;
}

ExtendedReal invariant_I2_q(const Rational& r1, const Rational& r2) {
  ExtendedReal out;
  if (sgn(r1) == 0) {
    out.pole = true;
    return out;
  }
  const Rational t = 100 * r2 / (9 * r1 * r1) - 1;
  if (sgn(t) == 0) {
    out.infinite = true;
    out.g2 = true;
    return out;
  }
  out.value = 1 / t;
  return out;
}

InvariantRecord invariant_record(const Rational& m) {
  InvariantRecord r;
  r.m = m;
  r.k = 2 * m - 1;
  r.J = invariant_J(m);
  r.I2 = invariant_I2_k(r.k);
  r.g2 = r.I2.g2;
  Rational inv = 0;
  if (!r.I2.infinite) {
    if (sgn(r.I2.value) == 0) {
      r.consistency_defined = false;
      return r;
    }
    inv = 1 / r.I2.value;
  }
  r.consistency = 25 * r.J - 9 * (1 + inv);
  return r;
}

}  // namespace monge::lie
