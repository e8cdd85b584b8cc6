#include "monge/jet.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace monge::jet {

using sym::EvalContext;

Chart Chart::monge(int n) {
  Chart c;
  c.vars = {"x", "y", "z"};
  for (int i = 1; i <= n; ++i) c.vars.push_back("z" + std::to_string(i));
  return c;
}

int Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == name) return static_cast<int>(i);
  }
  return -1;
}

VectorField VectorField::zero(const Chart& c, std::string name) {
  return {c, std::vector<Expr>(c.dim()), std::move(name)};
}

VectorField VectorField::coordinate(const Chart& c, std::string_view var) {
  VectorField v = zero(c, "d/d" + std::string(var));
  int i = c.index_of(var);
  if (i < 0) throw ChartMismatch("no variable " + std::string(var) + " in chart");
  v.comps[static_cast<std::size_t>(i)] = Expr(1);
  return v;
}

VectorField VectorField::from(const Chart& c, std::vector<Expr> comps, std::string name) {
  if (comps.size() != c.dim()) throw ChartMismatch("component count does not match chart");
  return {c, std::move(comps), std::move(name)};
}

Expr VectorField::apply(const Expr& g) const {
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].is_zero()) continue;
    Expr d = sym::diff(g, chart.vars[i]);
    if (d.is_zero()) continue;
    terms.push_back(comps[i] * d);
  }
  return sym::add(std::move(terms));
}

std::vector<Complex> VectorField::at(const EvalContext& ctx) const {
  std::vector<Complex> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(sym::eval(c, ctx));
  return out;
}

bool VectorField::is_zero() const {
  return std::all_of(comps.begin(), comps.end(), [](const Expr& e) { return e.is_zero(); });
}

namespace {

void require_same_chart(const VectorField& a, const VectorField& b) {
  if (!(a.chart == b.chart)) throw ChartMismatch("vector fields live on different charts");
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_chart(a, b);
  VectorField out = a;
  for (std::size_t i = 0; i < out.comps.size(); ++i) out.comps[i] = a.comps[i] + b.comps[i];
  out.name = a.name + "+" + b.name;
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_chart(a, b);
  VectorField out = a;
  for (std::size_t i = 0; i < out.comps.size(); ++i) out.comps[i] = a.comps[i] - b.comps[i];
  out.name = a.name + "-" + b.name;
  return out;
}

VectorField operator*(const Expr& c, const VectorField& v) {
  VectorField out = v;
  for (auto& e : out.comps) e = c * e;
  out.name = "(" + c.str() + ")*" + v.name;
  return out;
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  require_same_chart(v, w);
  VectorField out = VectorField::zero(v.chart, "[" + v.name + "," + w.name + "]");
  for (std::size_t i = 0; i < out.comps.size(); ++i) {
    out.comps[i] = v.apply(w.comps[i]) - w.apply(v.comps[i]);
  }
  return out;
}

std::vector<std::vector<Expr>> Distribution::annihilators() const {
  if (!monge) throw std::logic_error("annihilators are only generated for Monge distributions");
  const int n = monge->n;
  std::vector<std::vector<Expr>> forms;
  auto row = [&](int target, const Expr& coef) {
    std::vector<Expr> r(chart.dim());
    r[0] = -coef;
    r[static_cast<std::size_t>(target)] = Expr(1);
    forms.push_back(std::move(r));
  };
  row(1, monge->f);
  row(2, Expr::variable("z1"));
  for (int i = 1; i < n; ++i) row(2 + i, Expr::variable("z" + std::to_string(i + 1)));
  return forms;
}

Distribution monge_distribution(const Expr& f, int n) {
  if (n < 2) throw std::invalid_argument("Monge order must be at least 2");
  Distribution d;
  d.chart = Chart::monge(n);
  std::vector<Expr> x1(d.chart.dim());
  x1[0] = Expr(1);
  x1[1] = f;
  x1[2] = Expr::variable("z1");
  for (int i = 1; i < n; ++i) x1[2 + i] = Expr::variable("z" + std::to_string(i + 1));
  d.span.push_back(VectorField::from(d.chart, std::move(x1), "X1"));
  VectorField x2 = VectorField::coordinate(d.chart, "z" + std::to_string(n));
  x2.name = "X2";
  d.span.push_back(std::move(x2));
  d.monge = MongeData{f, n};
  return d;
}

int numeric_rank(const std::vector<std::vector<Complex>>& columns, double rel_tol) {
  if (columns.empty()) return 0;
  const auto rows = static_cast<Eigen::Index>(columns[0].size());
  Eigen::MatrixXcd m(rows, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Complex& v = columns[j][static_cast<std::size_t>(i)];
      m(i, static_cast<Eigen::Index>(j)) = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

GrowthResult growth_vector(const Distribution& d, const EvalContext& point, double rel_tol) {
  GrowthResult out;
  std::vector<VectorField> basis;
  std::vector<std::vector<Complex>> cols;
  int rank = 0;

  // Adds v if it raises the rank at the point.
  auto try_add = [&](const VectorField& v) {
    auto c = v.at(point);
    cols.push_back(c);
    int r = numeric_rank(cols, rel_tol);
    if (numeric_rank(cols, rel_tol * 10) != r) out.stable = false;
    if (r > rank) {
      rank = r;
      basis.push_back(v);
      return true;
    }
    cols.pop_back();
    return false;
  };

  std::vector<VectorField> first;
  for (const auto& v : d.span) {
    if (try_add(v)) first.push_back(v);
  }
  out.dims.push_back(rank);
  std::vector<VectorField> newest = first;
  const int full = static_cast<int>(d.chart.dim());
  while (rank < full) {
    int before = rank;
    std::vector<VectorField> added;
    for (const auto& x : first) {
      for (const auto& y : newest) {
        VectorField b = lie_bracket(x, y);
        if (b.is_zero()) continue;
        if (try_add(b)) added.push_back(b);
      }
    }
    out.dims.push_back(rank);
    if (rank == before) break;
    newest = std::move(added);
  }
  return out;
}

SymmetryResult is_symmetry(const VectorField& v, const Distribution& d,
                           const sym::ZeroTestConfig& cfg) {
  SymmetryResult out;
  auto forms = d.annihilators();
  std::vector<VectorField> brackets;
  std::vector<Expr> contractions;
  for (const auto& x : d.span) {
    VectorField b = lie_bracket(v, x);
    for (const auto& th : forms) {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < th.size(); ++i) {
        if (!th[i].is_zero() && !b.comps[i].is_zero()) terms.push_back(th[i] * b.comps[i]);
      }
      contractions.push_back(sym::add(std::move(terms)));
    }
    brackets.push_back(std::move(b));
  }
  std::vector<Expr> all = contractions;
  for (const auto& b : brackets) all.insert(all.end(), b.comps.begin(), b.comps.end());
  for (const auto& x : d.span) all.insert(all.end(), x.comps.begin(), x.comps.end());

  long double worst = 0;
  int max_rank = 0;
  sym::for_each_sample(cfg, sym::free_symbols(all), [&](const EvalContext& ctx) {
    long double local = 0;
    for (const auto& c : contractions) {
      auto t = sym::eval_tracked(c, ctx);
      local = std::max(local, std::abs(t.value) / (1 + t.max_intermediate));
    }
    auto x1 = d.span[0].at(ctx);
    auto x2 = d.span[1].at(ctx);
    int r = 0;
    for (const auto& b : brackets) r = std::max(r, numeric_rank({x1, x2, b.at(ctx)}, 1e-8));
    worst = std::max(worst, local);
    max_rank = std::max(max_rank, r);
  });
  out.residual = static_cast<double>(worst);
  out.max_rank = max_rank;
  out.samples = cfg.samples;
  out.ok = out.residual <= cfg.tol && max_rank <= static_cast<int>(d.span.size());
  return out;
}

Expr TotalDerivative::truncated(const Expr& g) const {
  std::vector<Expr> terms{sym::diff(g, "x"), f_ * sym::diff(g, "y"),
                          Expr::variable("z1") * sym::diff(g, "z")};
  for (int i = 1; i < n_; ++i) {
    terms.push_back(Expr::variable("z" + std::to_string(i + 1)) *
                    sym::diff(g, "z" + std::to_string(i)));
  }
  return sym::add(std::move(terms));
}

Expr TotalDerivative::operator()(const Expr& g) const {
  return truncated(g) + Expr::variable(spare_var()) * sym::diff(g, top_var());
}

TotalDerivative total_derivative(const Expr& f, int n) { return TotalDerivative(f, n); }

}  // namespace monge::jet
