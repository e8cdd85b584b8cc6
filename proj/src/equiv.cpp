#include "monge/equiv.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "monge/parse.hpp"

namespace monge::equiv {

using jet::Chart;
using param::Dih4;
using param::format_rational;
using param::KleinFour;
using sym::Complex;

namespace {

std::string p_label(const Rational& m) { return "P[" + format_rational(m) + "]"; }

std::vector<Expr> parse_all(const std::vector<std::string>& comps, const sym::Bindings& b) {
  std::vector<Expr> out;
  for (const auto& c : comps) out.push_back(sym::subst(sym::parse(c), b));
  return out;
}

PointMap make(std::string name, std::vector<Expr> comps, std::string src, std::string tgt,
              std::optional<Dih4> lift = std::nullopt) {
  PointMap p;
  p.name = std::move(name);
  p.source = p.target = Chart::monge(2);
  p.comps = std::move(comps);
  p.source_fiber = std::move(src);
  p.target_fiber = std::move(tgt);
  p.lift = lift;
  return p;
}

const Rational& need_m(const std::string& name, const std::optional<Rational>& m) {
  if (!m) throw MapError(name + " needs a value of m");
  return *m;
}

void forbid(const std::string& name, const Rational& m, std::initializer_list<Rational> bad) {
  for (const auto& v : bad) {
    if (m == v) throw MapError(name + " is undefined at m = " + format_rational(m));
  }
}

PointMap psi_map(const Rational& m, bool half) {
  forbid(half ? "PsiHalf" : "Psi", m, {0, sym::rational(1, 2), 1});
  sym::Bindings b{{"m", Expr(m)}, {"c", Expr(half ? sym::rational(1, 2) : sym::rational(1, 4))}};
  auto comps = parse_all(
      {"(z2/m + z1 + (2*m-1)/(4*m)*z)*exp(-x/2)",
       "(z2 - z/4)*exp((m-1/2)*x)/m",
       "(y - (m-1/2)*z*z2 + 2*(m-1)*z1*z2 + z2^2 + m*(m-1)*z1^2 - m*(m-1/2)*z*z1"
       " - c*(m^2-2*m+3/4)*z^2)/(2*m^2)",
       "(z2 + (m-1)*z1 - (m-1/2)*z/2)*exp(x/2)/m",
       "exp(x)"},
      b);
  return make(half ? "PsiHalf" : "Psi", std::move(comps), "Qnm[" + format_rational(m) + "]",
              p_label(m));
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"Ta", "Tb", "Tzeta", "Psi", "PsiHalf", "PsiBar", "Phi", "Upsilon", "Tcomp", "Id"};
}

PointMap builtin(const std::string& name, const std::optional<Rational>& m_opt) {
  if (name == "Ta") {
    const Rational& m = need_m(name, m_opt);
    return make("Ta", parse_all({"z1", "y", "x*z1 - z", "x", "1/z2"}, {}), p_label(m),
                p_label(1 - m), Dih4::a());
  }
  if (name == "Tb") {
    const Rational& m = need_m(name, m_opt);
    forbid(name, m, {0, sym::rational(1, 2)});
    const Rational k = 2 * m - 1;
    sym::Bindings b{{"m", Expr(m)}};
    std::vector<std::string> comps;
    if (sgn(k) > 0) {
      b["s"] = sym::sqrt(Expr(k));
      comps = {"x*z2^(1-m)/s", "m/s*z1 - (m-1)/s*x*z2",
               "z - x*z1 + x*y*z2^(1-m)/m + (m-1)^2/(m*(2*m-1))*x^2*z2",
               "s/m*y - (m-1)/(m*s)*x*z2^m", "z2^(2*m-1)"};
    } else {
      // Real branch: the principal formula with sqrt(2m-1) = i sqrt(1-2m),
      // composed with (x, y, z, z1, z2) -> (ix, iy, -z, iz1, z2).
      b["s"] = sym::sqrt(Expr(Rational(-k)));
      comps = {"x*z2^(1-m)/s", "m/s*z1 - (m-1)/s*x*z2",
               "-z + x*z1 - x*y*z2^(1-m)/m - (m-1)^2/(m*(2*m-1))*x^2*z2",
               "-s/m*y - (m-1)/(m*s)*x*z2^m", "z2^(2*m-1)"};
    }
    PointMap p = make("Tb", parse_all(comps, b), p_label(m), p_label(m / k), Dih4::b());
    if (sgn(k) < 0) p.domain_notes.push_back("real branch for 2m-1 < 0");
    p.domain_notes.push_back("z2 > 0");
    return p;
  }
  if (name == "Tzeta") {
    const Rational& m = need_m(name, m_opt);
    forbid(name, m, {0, sym::rational(1, 2), 1});
    sym::Bindings b{{"m", Expr(m)}, {"mu", Expr(Rational(m / (2 * m - 1)))}};
    auto comps = parse_all({"(2*m-1)/(m-1)*y*z2^(1-m) - m/(m-1)*z1", "y*z2^(1-2*m)",
                            "(y^2*z2^(1-2*m) - x*y*z2^(1-m))/mu + x*z1 - z",
                            "y*z2^(-m)/mu - (m-1)/m*x", "1/z2"},
                           b);
    PointMap p = make("Tzeta", std::move(comps), p_label(m), p_label(m), Dih4::zeta());
    p.domain_notes.push_back("z2 > 0");
    return p;
  }
  if (name == "Psi") return psi_map(need_m(name, m_opt), false);
  if (name == "PsiHalf") return psi_map(need_m(name, m_opt), true);
  if (name == "PsiBar") {
    return make("PsiBar",
                parse_all({"(z2-z1)*exp(x)", "z2 - z", "(z2^2 - z1^2)/2 + z1*z2 - y",
                           "(z1+z2)*exp(-x)", "exp(-2*x)"},
                          {}),
                "N12", "P[1/2]");
  }
  if (name == "Phi") {
    return make("Phi",
                parse_all({"(z - z2)*exp(x)/2", "(x*z2 - z1 - (x-1)*z)*exp(x)",
                           "(z2*(z2+2*z) - 3*z^2 + 4*z1*z2 - 2*y)/8",
                           "-(z2 + 2*z1 + z)*exp(-x)/2", "exp(-2*x)"},
                          {}),
                "NS", "ln");
  }
  if (name == "Upsilon") {
    return make("Upsilon",
                parse_all({"2*y - x*exp(z2)", "x + z1 - x*z2", "2*(x*z1 - z) - x^2*(z2 - 1/2)",
                           "x*exp(-z2)", "exp(-2*z2)"},
                          {}),
                "exp", "P[1/2]");
  }
  if (name == "Tcomp") {
    return make("Tcomp",
                parse_all({"exp(x + exp(-2*x))*(z1 - z2) + 2*(z2 - z)",
                           "2*z1*exp(-x) + (z2 - z1)*exp(x)",
                           "2*(y - z1^2) + exp(2*x)*(z1 - z2)^2/2",
                           "-exp(x - exp(-2*x))*(z1 - z2)", "exp(-2*exp(-2*x))"},
                          {}),
                "N12", "exp");
  }
  if (name == "Id") {
    std::string fiber = m_opt ? p_label(*m_opt) : "P[m]";
    PointMap p = jet::identity_map(Chart::monge(2), fiber);
    return p;
  }
  throw MapError("unknown map '" + name + "'");
}

ModelPair builtin_models(const std::string& name, const std::optional<Rational>& m_opt) {
  using namespace catalog;
  if (name == "Ta") {
    const Rational& m = need_m(name, m_opt);
    return {model_Pm(m), model_Pm(1 - m)};
  }
  if (name == "Tb") {
    const Rational& m = need_m(name, m_opt);
    forbid(name, m, {0, sym::rational(1, 2)});
    return {model_Pm(m), model_Pm(m / (2 * m - 1))};
  }
  if (name == "Tzeta" || name == "Id") {
    const Rational& m = need_m(name, m_opt);
    return {model_Pm(m), model_Pm(m)};
  }
  if (name == "Psi" || name == "PsiHalf") {
    const Rational& m = need_m(name, m_opt);
    return {model_Qnm(m), model_Pm(m)};
  }
  if (name == "PsiBar") return {model_N12(), model_Pm(sym::rational(1, 2))};
  if (name == "Phi") return {model_NS(), model_ln()};
  if (name == "Upsilon") return {model_exp(), model_Pm(sym::rational(1, 2))};
  if (name == "Tcomp") return {model_N12(), model_exp()};
  throw MapError("unknown map '" + name + "'");
}

namespace {

// D(num)/D(den) without the spare jet variable.
Expr quotient(const jet::TotalDerivative& d, const Expr& num, const Expr& den,
              const sym::ZeroTestConfig& cfg) {
  const std::string top = d.top_var();
  const Expr dnum = sym::diff(num, top);
  const Expr dden = sym::diff(den, top);
  const bool den_top = !sym::is_zero(dden, cfg).zero;
  const bool num_top = !sym::is_zero(dnum, cfg).zero;
  const Expr tnum = d.truncated(num);
  const Expr tden = d.truncated(den);
  if (!den_top) {
    if (num_top) throw ProlongError(d.spare_var() + " does not cancel");
    if (sym::is_zero(tden, cfg).zero) throw ProlongError("D(psi) vanishes identically");
    return tnum / tden;
  }
  if (!sym::is_zero(tnum * dden - tden * dnum, cfg).zero) {
    throw ProlongError(d.spare_var() + " does not cancel");
  }
  return dnum / dden;
}

}  // namespace

Prolongation prolong(const Expr& psi, const Expr& phi, const Expr& phi_y, const Expr& f, int n,
                     const sym::ZeroTestConfig& cfg) {
  const auto d = jet::total_derivative(f, n);
  Prolongation out;
  out.map.name = "prolongation";
  out.map.source = out.map.target = Chart::monge(n);
  out.map.comps = {psi, phi_y, phi};
  Expr prev = phi;
  for (int i = 1; i <= n; ++i) {
    prev = quotient(d, prev, psi, cfg);
    out.map.comps.push_back(prev);
  }
  out.ybar1 = quotient(d, phi_y, psi, cfg);
  return out;
}

EquivalenceReport check_equivalence(const PointMap& t, const MongeModel& src,
                                    const MongeModel& tgt, const sym::ZeroTestConfig& cfg) {
  EquivalenceReport rep;
  rep.pushforward = jet::pushforward_check(t, src.distribution(), tgt.distribution(), cfg);
  const auto d = jet::total_derivative(src.f, src.n);
  sym::Bindings at_image;
  for (std::size_t i = 0; i < t.comps.size(); ++i) at_image[tgt.chart.vars[i]] = t.comps[i];
  const Expr consistency = d(t.comps[1]) - sym::subst(tgt.f, at_image) * d(t.comps[0]);
  auto z = sym::is_zero(consistency, cfg);
  rep.ybar1_residual = z.max_residual;
  rep.samples = std::max(rep.pushforward.samples, z.samples);
  rep.ok = rep.pushforward.ok && z.zero;
  return rep;
}

PointMap word_map(std::string_view word, const Rational& m) {
  PointMap acc = jet::identity_map(Chart::monge(2), p_label(m));
  Rational cur = m;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const char letter = *it;
    PointMap step;
    KleinFour g;
    if (letter == 'a') {
      step = builtin("Ta", cur);
      g = KleinFour::gen_a();
    } else if (letter == 'b') {
      step = builtin("Tb", cur);
      g = KleinFour::gen_b();
    } else {
      throw MapError(std::string("word letters must be a or b, got '") + letter + "'");
    }
    acc = compose(step, acc);
    cur = param::act(g, cur);
  }
  acc.name = word.empty() ? "e" : std::string(word);
  return acc;
}

bool DihedralReport::ok() const {
  return std::all_of(identities.begin(), identities.end(), [](const auto& r) { return r.ok; });
}

DihedralReport dihedral_suite(const Rational& m, const sym::ZeroTestConfig& cfg) {
  DihedralReport rep;
  rep.m = m;
  const PointMap id = jet::identity_map(Chart::monge(2), p_label(m));
  auto close = [&](const std::string& label, const PointMap& a, const PointMap& b) {
    IdentityResult r;
    r.name = label;
    try {
      auto dist = jet::map_distance(a, b, cfg);
      r.residual = dist.residual;
      r.ok = dist.residual <= cfg.tol;
      if (!r.ok) r.detail = "residual above tolerance";
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    rep.identities.push_back(std::move(r));
  };
  const PointMap zeta = word_map("abab", m);
  close("aa = e", word_map("aa", m), id);
  close("bb = e", word_map("bb", m), id);
  close("abab = Tzeta", zeta, builtin("Tzeta", m));
  close("zeta^2 = e", compose(zeta, zeta), id);
  close("ab = ba zeta", word_map("ab", m), compose(word_map("ba", m), zeta));

  {
    IdentityResult r;
    r.name = "zeta != e";
    auto dist = jet::map_distance(zeta, id, cfg);
    r.residual = dist.residual;
    r.ok = dist.residual > 0.1;
    if (!r.ok) r.detail = "zeta is indistinguishable from the identity";
    rep.identities.push_back(std::move(r));
  }
  {
    IdentityResult r;
    r.name = "lift covers the parameter action";
    r.ok = true;
    for (const char* w : {"a", "b", "ab", "ba", "aba", "bab", "abab"}) {
      const PointMap p = word_map(w, m);
      const Dih4 g = Dih4::word(w);
      const std::string expect = p_label(param::act(g.project(), m));
      if (!p.lift || !(*p.lift == g) || p.target_fiber != expect) {
        r.ok = false;
        r.detail += std::string(w) + " lands in " + p.target_fiber + ", expected " + expect + "; ";
      }
    }
    rep.identities.push_back(std::move(r));
  }
  {
    IdentityResult r;
    r.name = "Dih4 table";
    r.ok = param::subgroup_report().ok();
    rep.identities.push_back(std::move(r));
  }
  return rep;
}

std::optional<std::vector<Complex>> upsilon_inverse(const std::vector<Complex>& target) {
  using Vec = Eigen::Matrix<Complex, 5, 1>;
  using Mat = Eigen::Matrix<Complex, 5, 5>;
  static const PointMap ups = builtin("Upsilon");
  static const std::vector<Expr> jac = [] {
    std::vector<Expr> j;
    for (const auto& c : ups.comps) {
      for (const auto& v : ups.source.vars) j.push_back(sym::diff(c, v));
    }
    return j;
  }();
  const Chart& chart = ups.source;
  auto residual = [&](const Vec& w) -> std::optional<Vec> {
    try {
      auto img = ups.apply({w(0), w(1), w(2), w(3), w(4)});
      Vec r;
      for (int i = 0; i < 5; ++i) r(i) = img[static_cast<std::size_t>(i)] - target[static_cast<std::size_t>(i)];
      return r;
    } catch (const sym::DomainError&) {
      return std::nullopt;
    }
  };
  long double scale = 1;
  for (const auto& t : target) scale = std::max(scale, std::abs(t));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int start = 0; start < 12; ++start) {
    Vec w = Vec::Zero();
    if (start > 0) {
      for (int i = 0; i < 5; ++i) w(i) = Complex(start * u(rng), 0);
    }
    auto r = residual(w);
    if (!r) continue;
    for (int it = 0; it < 200; ++it) {
      const long double norm = r->norm();
      if (norm <= 1e-15L * scale) {
        return std::vector<Complex>(w.data(), w.data() + 5);
      }
      sym::EvalContext ctx;
      for (int i = 0; i < 5; ++i) ctx.set(chart.vars[static_cast<std::size_t>(i)], w(i));
      Mat jm;
      try {
        for (int i = 0; i < 5; ++i) {
          for (int j = 0; j < 5; ++j) jm(i, j) = sym::eval(jac[static_cast<std::size_t>(i * 5 + j)], ctx);
        }
      } catch (const sym::DomainError&) {
        break;
      }
      const Vec step = jm.partialPivLu().solve(*r);
      long double t = 1;
      bool improved = false;
      for (int k = 0; k < 40; ++k, t /= 2) {
        const Vec cand = w - t * step;
        auto rc = residual(cand);
        if (rc && rc->norm() < norm) {
          w = cand;
          r = rc;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (r && r->norm() <= 1e-12L * scale) return std::vector<Complex>(w.data(), w.data() + 5);
  }
  return std::nullopt;
}

CompositeReport composite_check(const sym::ZeroTestConfig& cfg) {
  const PointMap psibar = builtin("PsiBar");
  const PointMap closed = builtin("Tcomp");
  CompositeReport rep;
  long double worst = 0;
  std::set<std::string> symbols(psibar.source.vars.begin(), psibar.source.vars.end());
  sym::for_each_sample(cfg, symbols, [&](const sym::EvalContext& ctx) {
    std::vector<Complex> p;
    for (const auto& v : psibar.source.vars) p.push_back(ctx.values.at(v));
    const auto q = psibar.apply(p);
    const auto t = closed.apply(p);
    const auto w = upsilon_inverse(q);
    if (!w) {
      ++rep.newton_failures;
      return;
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      worst = std::max(worst, std::abs((*w)[i] - t[i]) / (1 + std::abs(t[i])));
    }
  });
  rep.samples = cfg.samples;
  rep.residual = static_cast<double>(worst);
  return rep;
}

}  // namespace monge::equiv
