#include "monge/point_map.hpp"

#include <algorithm>

namespace monge::jet {

using sym::EvalContext;

std::vector<Complex> PointMap::apply(const std::vector<Complex>& point) const {
  if (point.size() != source.dim()) throw ChartMismatch("point has wrong dimension");
  EvalContext ctx;
  for (std::size_t i = 0; i < point.size(); ++i) ctx.set(source.vars[i], point[i]);
  std::vector<Complex> out;
  for (const auto& c : comps) out.push_back(sym::eval(c, ctx));
  return out;
}

std::optional<std::vector<sym::Rational>> PointMap::apply_exact(
    const std::vector<sym::Rational>& point) const {
  if (point.size() != source.dim()) throw ChartMismatch("point has wrong dimension");
  sym::ExactContext ctx;
  for (std::size_t i = 0; i < point.size(); ++i) ctx[source.vars[i]] = point[i];
  std::vector<sym::Rational> out;
  for (const auto& c : comps) {
    auto v = sym::eval_exact(c, ctx);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

PointMap identity_map(const Chart& c, const std::string& fiber) {
  PointMap m;
  m.name = "Id";
  m.source = m.target = c;
  for (std::size_t i = 0; i < c.dim(); ++i) m.comps.push_back(c.var(i));
  m.source_fiber = m.target_fiber = fiber;
  m.lift = param::Dih4::e();
  return m;
}

PointMap compose(const PointMap& f, const PointMap& g) {
  if (!(g.target == f.source)) throw ChartMismatch("charts do not align in composition");
  if (g.target_fiber != f.source_fiber) {
    throw FiberMismatch("fiber mismatch: " + g.name + " lands in " + g.target_fiber + " but " +
                        f.name + " starts from " + f.source_fiber);
  }
  PointMap out;
  out.name = f.name + "*" + g.name;
  out.source = g.source;
  out.target = f.target;
  sym::Bindings b;
  for (std::size_t i = 0; i < g.comps.size(); ++i) b[f.source.vars[i]] = g.comps[i];
  for (const auto& c : f.comps) out.comps.push_back(sym::subst(c, b));
  out.source_fiber = g.source_fiber;
  out.target_fiber = f.target_fiber;
  if (f.lift && g.lift) out.lift = *f.lift * *g.lift;
  out.domain_notes = g.domain_notes;
  out.domain_notes.insert(out.domain_notes.end(), f.domain_notes.begin(), f.domain_notes.end());
  return out;
}

PushforwardReport pushforward_check(const PointMap& t, const Distribution& src,
                                    const Distribution& tgt, const sym::ZeroTestConfig& cfg) {
  if (!(t.source == src.chart) || !(t.target == tgt.chart)) {
    throw ChartMismatch("map charts do not match the distributions");
  }
  PushforwardReport rep;
  sym::Bindings at_image;
  for (std::size_t i = 0; i < t.comps.size(); ++i) at_image[tgt.chart.vars[i]] = t.comps[i];
  std::vector<std::vector<Expr>> forms;
  for (const auto& row : tgt.annihilators()) {
    std::vector<Expr> r;
    for (const auto& c : row) r.push_back(sym::subst(c, at_image));
    forms.push_back(std::move(r));
  }
  std::vector<Expr> contractions;
  for (const auto& x : src.span) {
    std::vector<Expr> pushed;
    for (const auto& c : t.comps) pushed.push_back(x.apply(c));
    for (const auto& th : forms) {
      std::vector<Expr> terms;
      for (std::size_t j = 0; j < th.size(); ++j) {
        if (!th[j].is_zero() && !pushed[j].is_zero()) terms.push_back(th[j] * pushed[j]);
      }
      contractions.push_back(sym::add(std::move(terms)));
    }
  }
  const std::size_t n = t.comps.size();
  std::vector<Expr> jac;
  for (const auto& c : t.comps) {
    for (std::size_t j = 0; j < n; ++j) jac.push_back(sym::diff(c, src.chart.vars[j]));
  }
  std::vector<Expr> all = contractions;
  all.insert(all.end(), jac.begin(), jac.end());

  long double worst = 0;
  bool jac_ok = true;
  rep.domain_failures = sym::for_each_sample(cfg, sym::free_symbols(all), [&](const EvalContext& ctx) {
    long double local = 0;
    for (const auto& c : contractions) {
      auto v = sym::eval_tracked(c, ctx);
      local = std::max(local, std::abs(v.value) / (1 + v.max_intermediate));
    }
    std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) cols[j][i] = sym::eval(jac[i * n + j], ctx);
    }
    if (numeric_rank(cols, 1e-10) < static_cast<int>(n)) jac_ok = false;
    worst = std::max(worst, local);
  });
  rep.residual = static_cast<double>(worst);
  rep.jacobian_ok = jac_ok;
  rep.samples = cfg.samples;
  rep.ok = rep.residual <= cfg.tol && jac_ok;
  return rep;
}

MapDistance map_distance(const PointMap& a, const PointMap& b, const sym::ZeroTestConfig& cfg) {
  if (!(a.source == b.source) || !(a.target == b.target)) {
    throw ChartMismatch("maps have different charts");
  }
  std::vector<Expr> diffs;
  for (std::size_t i = 0; i < a.comps.size(); ++i) diffs.push_back(a.comps[i] - b.comps[i]);
  auto r = sym::all_zero(diffs, cfg);
  return {r.max_residual, r.samples};
}

}  // namespace monge::jet
