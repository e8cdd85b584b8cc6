#include "monge/checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "monge/catalog.hpp"
#include "monge/equiv.hpp"
#include "monge/lie.hpp"
#include "monge/paramspace.hpp"
#include "monge/parse.hpp"

namespace monge::checks {

using catalog::MongeModel;
using param::format_rational;
using sym::Expr;
using sym::Rational;
using sym::ZeroTestConfig;

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::SkippedDomain: return "skipped-domain";
  }
  return "fail";
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sym",        "structure", "maps", "dihedral",
                                              "invariants", "higher",    "weyl"};
  return names;
}

std::uint64_t check_seed(const std::string& id, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h ^ (seed * 0x9e3779b97f4a7c15ull);
}

namespace {

std::string tag(const Rational& m) { return "[m=" + format_rational(m) + "]"; }

Outcome verdict(bool pass, double residual, int samples, std::string message = {}) {
  return {pass, residual, samples, std::move(message)};
}

std::string join(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

class Builder {
 public:
  explicit Builder(const RunOptions& o) : opts(o) {}

  void add(std::string suite, int criterion, std::string id, std::string description,
           std::map<std::string, std::string> inputs,
           std::function<Outcome(const ZeroTestConfig&)> fn) {
    if (opts.suite != "all" && opts.suite != suite) return;
    defs.push_back({std::move(id), std::move(suite), criterion, std::move(description),
                    std::move(inputs), std::move(fn)});
  }

  std::vector<Rational> ms(std::vector<Rational> defaults) const {
    if (opts.m) return {*opts.m};
    return defaults;
  }

  const RunOptions& opts;
  std::vector<CheckDef> defs;
};

// ---------------------------------------------------------------- sym

std::vector<std::pair<std::string, std::function<MongeModel()>>> five_dim_models(
    const std::vector<Rational>& pm_values) {
  std::vector<std::pair<std::string, std::function<MongeModel()>>> out;
  for (const auto& m : pm_values) {
    out.emplace_back("P" + tag(m), [m] { return catalog::model_Pm(m); });
  }
  for (auto [a, b] : {std::pair{2, 1}, std::pair{1, 4}, std::pair{5, 2}}) {
    out.emplace_back("Qab[a=" + std::to_string(a) + ",b=" + std::to_string(b) + "]",
                     [a = a, b = b] { return catalog::model_Qab(a, b); });
  }
  out.emplace_back("N12", [] { return catalog::model_N12(); });
  out.emplace_back("ln", [] { return catalog::model_ln(); });
  out.emplace_back("NS", [] { return catalog::model_NS(); });
  out.emplace_back("exp", [] { return catalog::model_exp(); });
  return out;
}

const std::vector<Rational> kSymM{2, 3, -1, Rational(1, 4), Rational(1, 2), 5};

void add_sym(Builder& b) {
  for (const auto& [label, make] : five_dim_models(b.ms(kSymM))) {
    b.add("sym", 1, "sym.fields." + label,
          "each listed field V satisfies rank[X1 | X2 | [V, Xi]] = 2", {{"model", label}},
          [make = make](const ZeroTestConfig& cfg) {
            const MongeModel mm = make();
            const auto d = mm.distribution();
            double worst = 0;
            std::string bad;
            for (const auto& v : mm.symmetries) {
              const auto r = jet::is_symmetry(v, d, cfg);
              worst = std::max(worst, r.residual);
              if (!r.ok) bad += v.name + " (rank " + std::to_string(r.max_rank) + ") ";
            }
            if (mm.symmetries.size() != 7) bad += "expected 7 fields ";
            return verdict(bad.empty(), worst, cfg.samples, bad);
          });
    b.add("sym", 1, "sym.independence." + label,
          "the 7 listed fields stacked at 3 generic points have rank 7", {{"model", label}},
          [make = make](const ZeroTestConfig& cfg) {
            const MongeModel mm = make();
            std::vector<std::vector<sym::Complex>> cols(mm.symmetries.size());
            ZeroTestConfig c3 = cfg;
            c3.samples = 3;
            std::vector<Expr> all;
            for (const auto& v : mm.symmetries) all.insert(all.end(), v.comps.begin(), v.comps.end());
            sym::for_each_sample(c3, sym::free_symbols(all), [&](const sym::EvalContext& ctx) {
              std::vector<std::vector<sym::Complex>> vals;
              for (const auto& v : mm.symmetries) vals.push_back(v.at(ctx));
              for (std::size_t j = 0; j < vals.size(); ++j) {
                cols[j].insert(cols[j].end(), vals[j].begin(), vals[j].end());
              }
            });
            const int r = jet::numeric_rank(cols, 1e-8);
            return verdict(r == 7, 0, 3, "rank " + std::to_string(r));
          });
  }
}

// ---------------------------------------------------------- structure

std::optional<std::string> expect_bracket(const lie::LieAlgebraData& alg, const std::string& u,
                                          const std::string& v,
                                          const std::map<std::string, Rational>& expect) {
  const int i = alg.index_of(u), j = alg.index_of(v);
  const auto got = alg.bracket(alg.unit(static_cast<std::size_t>(i)), alg.unit(static_cast<std::size_t>(j)));
  for (std::size_t k = 0; k < alg.dim(); ++k) {
    auto it = expect.find(alg.basis[k].name);
    const Rational want = it == expect.end() ? Rational(0) : it->second;
    if (got[k] != want) {
      return "[" + u + "," + v + "] has " + alg.basis[k].name + " coefficient " +
             format_rational(got[k]) + ", expected " + format_rational(want);
    }
  }
  return std::nullopt;
}

lie::LieAlgebraData algebra_of(const MongeModel& mm, const ZeroTestConfig& cfg) {
  auto alg = lie::structure_constants(mm.symmetries, cfg);
  if (!alg.exact) throw lie::StructureError("no exact sample points found");
  return alg;
}

std::vector<Rational> w6prime(const lie::LieAlgebraData& alg) {
  auto e = alg.unit(static_cast<std::size_t>(alg.index_of("W6")));
  e[static_cast<std::size_t>(alg.index_of("W4"))] = Rational(-1, 2);
  return e;
}

std::vector<int> indices(const lie::LieAlgebraData& alg, std::initializer_list<const char*> names) {
  std::vector<int> out;
  for (const char* n : names) out.push_back(alg.index_of(n));
  return out;
}

std::string fmt_blocks(const std::vector<linalg::JordanBlock>& blocks) {
  std::string s;
  for (const auto& b : blocks) {
    s += format_rational(b.eigenvalue) + ":";
    for (int n : b.sizes) s += std::to_string(n);
    s += " ";
  }
  return s;
}

void add_structure(Builder& b) {
  for (const auto& m : b.ms({3, 2})) {
    b.add("structure", 2, "structure.Pm.brackets" + tag(m),
          "[W1,W5] = W3, [W2,W7] = -1/m W3, all other brackets in <W1,W2,W3,W5,W7> vanish",
          {{"model", "P"}, {"m", format_rational(m)}}, [m](const ZeroTestConfig& cfg) {
            const auto alg = algebra_of(catalog::model_Pm(m), cfg);
            const std::vector<std::string> h{"W1", "W2", "W3", "W5", "W7"};
            for (std::size_t i = 0; i < h.size(); ++i) {
              for (std::size_t j = i + 1; j < h.size(); ++j) {
                std::map<std::string, Rational> want;
                if (h[i] == "W1" && h[j] == "W5") want["W3"] = 1;
                if (h[i] == "W2" && h[j] == "W7") want["W3"] = -1 / m;
                if (auto err = expect_bracket(alg, h[i], h[j], want)) return verdict(false, 0, 0, *err);
              }
            }
            return verdict(true, alg.residual, alg.exact_points);
          });
    b.add("structure", 2, "structure.Pm.grading" + tag(m),
          "ad(W4) = k id on degrees -1: W1,W2,W5,W7 and -2: W3; Heisenberg bracket form",
          {{"model", "P"}, {"m", format_rational(m)}}, [m](const ZeroTestConfig& cfg) {
            const auto alg = algebra_of(catalog::model_Pm(m), cfg);
            std::map<int, int> labels;
            for (const char* n : {"W1", "W2", "W5", "W7"}) labels[alg.index_of(n)] = -1;
            labels[alg.index_of("W3")] = -2;
            labels[alg.index_of("W4")] = 0;
            labels[alg.index_of("W6")] = 0;
            const auto rep = lie::grading_check(alg, alg.index_of("W4"), labels);
            std::string msg;
            for (const auto& f : rep.failures) msg += f + "; ";
            return verdict(rep.ok, 0, alg.exact_points, msg);
          });
    b.add("structure", 2, "structure.Pm.derived-series" + tag(m), "derived series (7,5,1,0)",
          {{"model", "P"}, {"m", format_rational(m)}}, [m](const ZeroTestConfig& cfg) {
            const auto ds = lie::derived_series(algebra_of(catalog::model_Pm(m), cfg));
            return verdict(ds == std::vector<int>{7, 5, 1, 0}, 0, 0, join(ds));
          });
  }
  b.add("structure", 2, "structure.ln.brackets", "[V1,V5] = V3, [V2,V7] = -V3",
        {{"model", "ln"}}, [](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_ln(), cfg);
          if (auto err = expect_bracket(alg, "V1", "V5", {{"V3", 1}})) return verdict(false, 0, 0, *err);
          if (auto err = expect_bracket(alg, "V2", "V7", {{"V3", -1}})) return verdict(false, 0, 0, *err);
          return verdict(true, alg.residual, alg.exact_points);
        });
  b.add("structure", 0, "structure.ln.V4-V6", "[V4,V6] extracted from the fields (comes out 0)",
        {{"model", "ln"}}, [](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_ln(), cfg);
          auto err = expect_bracket(alg, "V4", "V6", {});
          return verdict(!err, alg.residual, alg.exact_points, err.value_or(""));
        });
  b.add("structure", 2, "structure.ln.grading", "ad(V4) grading with degree -1: V1,V2,V5,V7",
        {{"model", "ln"}}, [](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_ln(), cfg);
          std::map<int, int> labels;
          for (const char* n : {"V1", "V2", "V5", "V7"}) labels[alg.index_of(n)] = -1;
          labels[alg.index_of("V3")] = -2;
          labels[alg.index_of("V4")] = 0;
          labels[alg.index_of("V6")] = 0;
          const auto rep = lie::grading_check(alg, alg.index_of("V4"), labels);
          std::string msg;
          for (const auto& f : rep.failures) msg += f + "; ";
          return verdict(rep.ok, 0, alg.exact_points, msg);
        });
  b.add("structure", 2, "structure.ln.derived-series", "derived series (7,5,1,0)",
        {{"model", "ln"}}, [](const ZeroTestConfig& cfg) {
          const auto ds = lie::derived_series(algebra_of(catalog::model_ln(), cfg));
          return verdict(ds == std::vector<int>{7, 5, 1, 0}, 0, 0, join(ds));
        });
  b.add("structure", 0, "structure.Pm.frame-decomposition[m=3]",
        "W4 = x W1 + y W2 + (2z - x z1) W3 + z1 W5 over the frame W1,W2,W3,W5,W6'",
        {{"model", "P"}, {"m", "3"}}, [](const ZeroTestConfig& cfg) {
          const auto mm = catalog::model_Pm(3);
          const auto c = lie::frame_decompose(
              mm.field("W4"), {mm.field("W1"), mm.field("W2"), mm.field("W3"), mm.field("W5"),
                               mm.field("W6'")},
              cfg);
          std::vector<Expr> diffs;
          const char* want[] = {"x", "y", "2*z - x*z1", "z1", "0"};
          for (std::size_t i = 0; i < 5; ++i) diffs.push_back(c[i] - sym::parse(want[i]));
          const auto r = sym::all_zero(diffs, cfg);
          return verdict(r.zero, r.max_residual, r.samples);
        });

  // Jordan analysis.
  const Rational jm = b.opts.m && *b.opts.m != Rational(1, 2) ? *b.opts.m : Rational(3);
  b.add("structure", 3, "structure.Pm.jordan" + tag(jm),
        "ad(W6') on <W1,W2,W5,W7>: eigenvalues 1/2, 1/2-m, -1/2, m-1/2, blocks (1,1,1,1)",
        {{"model", "P"}, {"m", format_rational(jm)}}, [jm](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_Pm(jm), cfg);
          const auto a = lie::ad_restricted(alg, w6prime(alg), indices(alg, {"W1", "W2", "W5", "W7"}));
          const auto blocks = linalg::jordan_structure(a);
          std::multiset<Rational> eig, want{Rational(1, 2), Rational(1, 2) - jm, Rational(-1, 2), jm - Rational(1, 2)};
          for (const auto& bl : blocks) {
            for (int s : bl.sizes) {
              for (int i = 0; i < s; ++i) eig.insert(bl.eigenvalue);
            }
          }
          const auto part = linalg::jordan_partition(a);
          const bool ok = part == std::vector<int>{1, 1, 1, 1} && eig == want;
          return verdict(ok, 0, 0, fmt_blocks(blocks));
        });
  b.add("structure", 3, "structure.Pm.jordan[m=1/2]",
        "ad(W6') on <W1,W2,W5,W7> at m = 1/2 has blocks (1,1,2)", {{"model", "P"}, {"m", "1/2"}},
        [](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_Pm(Rational(1, 2)), cfg);
          const auto a = lie::ad_restricted(alg, w6prime(alg), indices(alg, {"W1", "W2", "W5", "W7"}));
          const auto part = linalg::jordan_partition(a);
          return verdict(part == std::vector<int>{1, 1, 2}, 0, 0,
                         join(part) + " " + fmt_blocks(linalg::jordan_structure(a)));
        });
  b.add("structure", 0, "structure.Pm.W6p-W7[m=1/2]",
        "[W6',W7] = -1/2 W2 at m = 1/2 with the zero integration constant",
        {{"model", "P"}, {"m", "1/2"}}, [](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_Pm(Rational(1, 2)), cfg);
          const auto got = alg.bracket(w6prime(alg), alg.unit(static_cast<std::size_t>(alg.index_of("W7"))));
          auto want = std::vector<Rational>(alg.dim());
          want[static_cast<std::size_t>(alg.index_of("W2"))] = Rational(-1, 2);
          return verdict(got == want, 0, 0);
        });
  b.add("structure", 3, "structure.ln.jordan", "ad(V6) on <V1,V2,V5,V7> has blocks (2,2)",
        {{"model", "ln"}}, [](const ZeroTestConfig& cfg) {
          const auto alg = algebra_of(catalog::model_ln(), cfg);
          const auto a = lie::ad_restricted(alg, alg.unit(static_cast<std::size_t>(alg.index_of("V6"))),
                                            indices(alg, {"V1", "V2", "V5", "V7"}));
          const auto part = linalg::jordan_partition(a);
          return verdict(part == std::vector<int>{2, 2}, 0, 0,
                         join(part) + " " + fmt_blocks(linalg::jordan_structure(a)));
        });
}

// --------------------------------------------------------------- maps

Outcome equivalence_outcome(const std::string& name, const std::optional<Rational>& m,
                            const ZeroTestConfig& cfg) {
  const auto t = equiv::builtin(name, m);
  const auto pair = equiv::builtin_models(name, m);
  const auto rep = equiv::check_equivalence(t, pair.source, pair.target, cfg);
  std::string msg;
  if (!rep.pushforward.jacobian_ok) msg = "Jacobian degenerate";
  return verdict(rep.ok, std::max(rep.pushforward.residual, rep.ybar1_residual), rep.samples, msg);
}

Outcome prolong_outcome(const std::string& name, const std::optional<Rational>& m,
                        const ZeroTestConfig& cfg) {
  const auto t = equiv::builtin(name, m);
  const auto pair = equiv::builtin_models(name, m);
  const auto p = equiv::prolong(t.comps[0], t.comps[2], t.comps[1], pair.source.f, 2, cfg);
  const auto r = sym::all_zero({p.map.comps[3] - t.comps[3], p.map.comps[4] - t.comps[4]}, cfg);
  return verdict(r.zero, r.max_residual, r.samples);
}

void add_maps(Builder& b) {
  for (const char* name : {"Ta", "Tb"}) {
    for (const auto& m : b.ms({2, 3, Rational(3, 4), 5})) {
      b.add("maps", 4, std::string("maps.") + name + ".equivalence" + tag(m),
            std::string(name) + " carries P_m onto P_{g.m}: pushforward and ybar1 consistency",
            {{"map", name}, {"m", format_rational(m)}},
            [name = std::string(name), m](const ZeroTestConfig& cfg) { return equivalence_outcome(name, m, cfg); });
    }
  }
  for (const auto& m : b.ms({2, 3, 5})) {
    b.add("maps", 6, "maps.Psi.equivalence" + tag(m), "Psi carries Qnm(m) onto P_m",
          {{"map", "Psi"}, {"m", format_rational(m)}},
          [m](const ZeroTestConfig& cfg) { return equivalence_outcome("Psi", m, cfg); });
  }
  for (const char* name : {"PsiBar", "Phi", "Upsilon"}) {
    b.add("maps", 6, std::string("maps.") + name + ".equivalence",
          std::string(name) + " is an equivalence of its model pair", {{"map", name}},
          [name = std::string(name)](const ZeroTestConfig& cfg) {
            return equivalence_outcome(name, std::nullopt, cfg);
          });
  }
  b.add("maps", 6, "maps.T.composition",
        "Newton-inverted Upsilon after PsiBar agrees with the closed-form T (residual < 1e-6)",
        {{"map", "Tcomp"}}, [](const ZeroTestConfig& cfg) {
          const auto rep = equiv::composite_check(cfg);
          const double tol = std::max(cfg.tol, 1e-6);
          const bool ok = rep.newton_failures == 0 && rep.residual < tol;
          std::string msg;
          if (rep.newton_failures) msg = std::to_string(rep.newton_failures) + " Newton failures";
          return verdict(ok, rep.residual, rep.samples, msg);
        });
  b.add("maps", 0, "maps.T.substitution",
        "the closed-form T coincides with Upsilon with PsiBar substituted", {{"map", "Tcomp"}},
        [](const ZeroTestConfig& cfg) {
          const auto ups = equiv::builtin("Upsilon");
          const auto psibar = equiv::builtin("PsiBar");
          const auto t = equiv::builtin("Tcomp");
          sym::Bindings bind;
          for (std::size_t i = 0; i < 5; ++i) bind[ups.source.vars[i]] = psibar.comps[i];
          std::vector<Expr> diffs;
          for (std::size_t i = 0; i < 5; ++i) diffs.push_back(sym::subst(ups.comps[i], bind) - t.comps[i]);
          const auto r = sym::all_zero(diffs, cfg);
          return verdict(r.zero, r.max_residual, r.samples);
        });
  const Rational em = b.opts.m.value_or(3);
  b.add("maps", 0, "maps.Psi.coefficient" + tag(em),
        "Psi with z^2 coefficient -1/2(m^2-2m+3/4) fails, -1/4(m^2-2m+3/4) passes",
        {{"map", "PsiHalf"}, {"m", format_rational(em)}}, [em](const ZeroTestConfig& cfg) {
          const auto half = equivalence_outcome("PsiHalf", em, cfg);
          const auto fixed = equivalence_outcome("Psi", em, cfg);
          return verdict(!half.pass && fixed.pass, half.residual, half.samples,
                         "residual with coefficient -1/2 " + std::to_string(half.residual));
        });

  for (const auto& [name, m] : std::vector<std::pair<std::string, std::optional<Rational>>>{
           {"Ta", b.opts.m.value_or(2)},
           {"Tb", b.opts.m.value_or(3)},
           {"Tb", b.opts.m ? std::nullopt : std::optional<Rational>(Rational(1, 4))},
           {"Psi", b.opts.m.value_or(3)},
           {"PsiBar", std::nullopt},
           {"Phi", std::nullopt},
           {"Upsilon", std::nullopt}}) {
    if (name == "Tb" && !m) continue;
    const bool param = name == "Ta" || name == "Tb" || name == "Psi";
    b.add("maps", 7, "maps." + name + ".prolongation" + (param ? tag(*m) : ""),
          "prolonging the (x, y, z) components of " + name + " restores its z1, z2 components",
          param ? std::map<std::string, std::string>{{"map", name}, {"m", format_rational(*m)}}
                : std::map<std::string, std::string>{{"map", name}},
          [name = name, m = m](const ZeroTestConfig& cfg) { return prolong_outcome(name, m, cfg); });
  }
  b.add("maps", 7, "maps.prolongation.non-contact",
        "psi = y, phi = z, phi_y = x on P_2 is rejected because z3 survives", {{"m", "2"}},
        [](const ZeroTestConfig& cfg) {
          try {
            equiv::prolong(sym::parse("y"), sym::parse("z"), sym::parse("x"), sym::parse("z2^2"), 2, cfg);
          } catch (const equiv::ProlongError& e) {
            return verdict(std::string(e.what()).find("z3 does not cancel") != std::string::npos, 0, 0, e.what());
          }
          return verdict(false, 0, 0, "prolongation unexpectedly succeeded");
        });
}

// ----------------------------------------------------------- dihedral

void add_dihedral(Builder& b) {
  for (const auto& m : b.ms({2, 3, -1, Rational(1, 4), 5})) {
    b.add("dihedral", 5, "dihedral.identities" + tag(m),
          "aa = bb = e, abab = Tzeta, zeta^2 = e, ab = ba zeta, zeta != e, lifts cover g.m",
          {{"m", format_rational(m)}}, [m](const ZeroTestConfig& cfg) {
            const auto rep = equiv::dihedral_suite(m, cfg);
            double worst = 0;
            std::string msg;
            for (const auto& id : rep.identities) {
              if (id.name != "zeta != e") worst = std::max(worst, id.residual);
              if (!id.ok) msg += id.name + " failed (" + std::to_string(id.residual) + ") " + id.detail + "; ";
            }
            return verdict(rep.ok(), worst, cfg.samples, msg);
          });
  }
  b.add("dihedral", 5, "dihedral.orbit[m=2]",
        "the words e, a, b, ab send P_2 to P_2, P_-1, P_2/3, P_1/3", {{"m", "2"}},
        [](const ZeroTestConfig&) {
          std::set<std::string> fibers, want{"P[2]", "P[-1]", "P[2/3]", "P[1/3]"};
          for (const char* w : {"", "a", "b", "ab"}) fibers.insert(equiv::word_map(w, 2).target_fiber);
          std::set<std::string> orbit;
          for (const auto& q : param::orbit_m(2).elements) orbit.insert("P[" + format_rational(q) + "]");
          return verdict(fibers == want && orbit == want, 0, 0);
        });
  b.add("dihedral", 5, "dihedral.kernel", "Ker p = {e, zeta}; <ab> is normal of order 4", {},
        [](const ZeroTestConfig&) {
          std::vector<std::string> kernel;
          for (const auto& g : param::Dih4::all()) {
            if (g.project() == param::KleinFour::e()) kernel.push_back(g.str());
          }
          const bool ok = param::subgroup_report().ok() && kernel.size() == 2;
          return verdict(ok, 0, 0);
        });
}

// --------------------------------------------------------- invariants

std::vector<Rational> random_rationals(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> out;
  while (static_cast<int>(out.size()) < count) {
    const long p = static_cast<long>(rng() % 201) - 100;
    const long q = static_cast<long>(rng() % 30) + 1;
    Rational m(p, q);
    m.canonicalize();
    if (2 * m == 1 || sgn(m) == 0 || m == 1) continue;
    out.push_back(m);
  }
  return out;
}

bool same(const lie::ExtendedReal& a, const lie::ExtendedReal& b) {
  if (a.pole || b.pole) return a.pole == b.pole;
  if (a.infinite || b.infinite) return a.infinite == b.infinite && a.g2 == b.g2;
  return a.value == b.value;
}

void add_invariants(Builder& b) {
  b.add("invariants", 8, "invariants.J.G-invariance", "J(1-m) = J(m) = J(m/(2m-1)) exactly", {},
        [](const ZeroTestConfig& cfg) {
          for (const auto& m : random_rationals(cfg.seed, 100)) {
            const Rational j = lie::invariant_J(m);
            if (lie::invariant_J(1 - m) != j || lie::invariant_J(m / (2 * m - 1)) != j) {
              return verdict(false, 0, 100, "fails at m = " + format_rational(m));
            }
          }
          return verdict(lie::invariant_J(2) == Rational(9, 25) && sgn(lie::invariant_J(Rational(1, 2))) == 0,
                         0, 100);
        });
  b.add("invariants", 8, "invariants.J.closed-form", "J(m) = 4k^2/(k^2+1)^2 with k = 2m - 1", {},
        [](const ZeroTestConfig& cfg) {
          const Expr j = sym::parse("(1-2*m)^2/(1-2*m+2*m^2)^2");
          const Expr k = sym::subst(sym::parse("4*k^2/(k^2+1)^2"), {{"k", sym::parse("2*m-1")}});
          ZeroTestConfig c = cfg;
          c.domains["m"] = sym::SymbolDomain::interval(-3, 3);
          const auto r = sym::is_zero(j - k, c);
          return verdict(r.zero, r.max_residual, r.samples);
        });
  b.add("invariants", 8, "invariants.I2.cross-family",
        "I2 from (r1, r2) = ((k^2+1)/4, k^2/16) equals I2 from k", {},
        [](const ZeroTestConfig& cfg) {
          for (const auto& m : random_rationals(cfg.seed ^ 1, 100)) {
            const Rational k = 2 * m - 1;
            const auto a = lie::invariant_I2_q((k * k + 1) / 4, k * k / 16);
            const auto c = lie::invariant_I2_k(k);
            if (!same(a, c)) return verdict(false, 0, 100, "differs at m = " + format_rational(m));
          }
          return verdict(true, 0, 100);
        });
  b.add("invariants", 8, "invariants.consistency", "25 J = 9 (1 + 1/I2) wherever I2 is finite", {},
        [](const ZeroTestConfig& cfg) {
          auto ms = random_rationals(cfg.seed ^ 2, 100);
          for (auto g2 : {Rational(2), Rational(-1), Rational(1, 3), Rational(2, 3)}) ms.push_back(g2);
          for (const auto& m : ms) {
            const auto rec = lie::invariant_record(m);
            if (rec.consistency_defined && sgn(rec.consistency) != 0) {
              return verdict(false, 0, 100, "fails at m = " + format_rational(m));
            }
          }
          return verdict(true, 0, static_cast<int>(ms.size()));
        });
  b.add("invariants", 8, "invariants.G2-loci",
        "k = +-3^{+-1}, r2 = 9 r1^2/100 and a:b = 3 are all flagged infinite (G2)", {},
        [](const ZeroTestConfig&) {
          std::string msg;
          for (auto k : {Rational(3), Rational(-3), Rational(1, 3), Rational(-1, 3)}) {
            const auto ik = lie::invariant_I2_k(k);
            const auto iq = lie::invariant_I2_q((k * k + 1) / 4, k * k / 16);
            if (!(ik.infinite && ik.g2 && iq.infinite && iq.g2)) msg += "k=" + format_rational(k) + " ";
          }
          for (auto m : {Rational(2), Rational(-1), Rational(1, 3), Rational(2, 3)}) {
            if (!lie::invariant_record(m).g2) msg += "m=" + format_rational(m) + " ";
          }
          const auto q = lie::invariant_I2_q(10, 9);
          if (!(q.infinite && q.g2)) msg += "r=(10,9) ";
          for (auto [a, c] : {std::pair{3, 1}, std::pair{1, 3}, std::pair{-3, 1}, std::pair{6, 2}}) {
            try {
              catalog::model_Qab(a, c);
              msg += "Qab accepted ";
            } catch (const catalog::ModelError& e) {
              if (std::string(e.what()).find("G2") == std::string::npos) msg += "Qab message ";
            }
          }
          return verdict(msg.empty(), 0, 0, msg);
        });
}

// ------------------------------------------------------------- growth

Outcome growth_outcome(const jet::Distribution& d, const std::vector<int>& want, int points,
                       const ZeroTestConfig& cfg) {
  ZeroTestConfig c = cfg;
  c.samples = points;
  std::set<std::string> symbols(d.chart.vars.begin(), d.chart.vars.end());
  std::vector<Expr> comps;
  for (const auto& v : d.span) comps.insert(comps.end(), v.comps.begin(), v.comps.end());
  for (const auto& s : sym::free_symbols(comps)) symbols.insert(s);
  std::string msg;
  bool ok = true;
  sym::for_each_sample(c, symbols, [&](const sym::EvalContext& ctx) {
    const auto g = jet::growth_vector(d, ctx);
    if (g.dims != want || !g.stable) {
      ok = false;
      msg = "got " + join(g.dims) + (g.stable ? "" : " (unstable rank)");
    }
  });
  return verdict(ok, 0, points, msg);
}

void add_growth(Builder& b) {
  for (const auto& [label, make] : five_dim_models(kSymM)) {
    b.add("higher", 9, "growth." + label, "growth vector (2,3,5) at 10 generic points", {{"model", label}},
          [make = make](const ZeroTestConfig& cfg) {
            return growth_outcome(make().distribution(), {2, 3, 5}, 10, cfg);
          });
  }
  b.add("higher", 9, "growth.cubic", "y' = (z''')^2 has growth vector (2,3,5,6)", {{"model", "higher[3;0,0,0]"}},
        [](const ZeroTestConfig& cfg) {
          return growth_outcome(catalog::model_higher(3, {0, 0, 0}).distribution(), {2, 3, 5, 6}, 10, cfg);
        });
  b.add("higher", 9, "growth.linear", "y' = z'' stalls at (2,3,4,4)", {{"model", "f=z2"}},
        [](const ZeroTestConfig& cfg) {
          return growth_outcome(jet::monge_distribution(sym::parse("z2"), 2), {2, 3, 4, 4}, 10, cfg);
        });
  b.add("higher", 0, "higher.model", "model_higher(3, (35,259,225)) expands (t^2+1)(t^2+9)(t^2+25)", {},
        [](const ZeroTestConfig& cfg) {
          const auto mm = catalog::model_higher(3, {35, 259, 225});
          const auto r = sym::is_zero(mm.f - sym::parse("z3^2 + 35*z2^2 + 259*z1^2 + 225*z^2"), cfg);
          const auto roots = param::coeffs_from_roots({1, 3, 5});
          const bool ok = r.zero && std::abs(roots[0] - 35.0) + std::abs(roots[1] - 259.0) + std::abs(roots[2] - 225.0) < 1e-9;
          return verdict(ok, r.max_residual, r.samples);
        });
}

// --------------------------------------------------------------- weyl

void add_weyl(Builder& b) {
  b.add("weyl", 10, "weyl.round-trip", "coefficients -> roots -> coefficients on 100 complex instances", {},
        [](const ZeroTestConfig& cfg) {
          std::mt19937_64 rng(cfg.seed);
          std::uniform_real_distribution<double> u(-3, 3);
          double worst = 0;
          for (int i = 0; i < 100; ++i) {
            const int n = 1 + i % 4;
            std::vector<param::Cplx> r;
            for (int j = 0; j < n; ++j) r.emplace_back(u(rng), u(rng));
            const auto back = param::coeffs_from_roots(param::roots_from_coeffs(r).roots);
            for (int j = 0; j < n; ++j) {
              const auto jj = static_cast<std::size_t>(j);
              worst = std::max(worst, std::abs(back[jj] - r[jj]) / (1 + std::abs(r[jj])));
            }
          }
          return verdict(worst < 1e-9, worst, 100);
        });
  b.add("weyl", 10, "weyl.orbit-size", "generic Weyl orbits have 2^(n-1) n! points (4 for n=2, 24 for n=3)", {},
        [](const ZeroTestConfig&) {
          const auto o2 = param::weyl_orbit({1.3, 2.7});
          const auto o3 = param::weyl_orbit({1.1, 2.3, 3.9});
          return verdict(o2.size() == 4 && o3.size() == 24, 0, 0,
                         std::to_string(o2.size()) + ", " + std::to_string(o3.size()));
        });
  b.add("weyl", 10, "weyl.stratum", "(1,3) and (1,3,5) are arithmetic, (1,2) is not", {},
        [](const ZeroTestConfig&) {
          const bool ok = param::arithmetic_stratum({1, 3}) && !param::arithmetic_stratum({1, 2}) &&
                          param::arithmetic_stratum({1, 3, 5});
          return verdict(ok, 0, 0);
        });
  b.add("weyl", 10, "weyl.stratum-invariance", "the stratum test is constant on Weyl orbits", {},
        [](const ZeroTestConfig&) {
          using C = param::Cplx;
          const std::vector<std::vector<C>> tuples{{1, 3}, {1, 2}, {1, 3, 5}, {0.5, 1.5, 2.5},
                                                   {C(1, 1), C(3, 3)}, {C(1, 1), C(2, 0)}, {2, 5, 3, 4}};
          for (const auto& t : tuples) {
            const bool base = param::arithmetic_stratum(t);
            for (const auto& g : param::signed_permutations(t)) {
              if (param::arithmetic_stratum(g) != base) return verdict(false, 0, 0, "not invariant");
            }
          }
          return verdict(true, 0, 0);
        });
  b.add("weyl", 10, "weyl.kappa-orbits",
        "kappa = 0 and 1 have orbits of size 2; |orbit| |stabilizer| = 4; canonical form is invariant", {},
        [](const ZeroTestConfig&) {
          using param::Kappa;
          std::string msg;
          if (param::orbit_kappa(Kappa::of(0)).elements.size() != 2) msg += "kappa=0 ";
          if (param::orbit_kappa(Kappa::of(1)).elements.size() != 2) msg += "kappa=1 ";
          for (const auto& k : {Kappa::of(0), Kappa::of(1), Kappa::inf(), Kappa::of(2), Kappa::of({0.4, 0.3}),
                                Kappa::of({0, 1}), Kappa::of({-2.5, 0.7})}) {
            const auto o = param::orbit_kappa(k);
            if (o.elements.size() * o.stabilizer.size() != 4) msg += "stabilizer law at " + k.str() + " ";
            for (const auto& e : o.elements) {
              if (!param::canonical_kappa(e).close_to(o.canonical, 1e-12)) msg += "canonical at " + k.str() + " ";
            }
          }
          return verdict(msg.empty(), 0, 0, msg);
        });
}

}  // namespace

std::vector<CheckDef> registry(const RunOptions& opts) {
  if (opts.suite != "all" &&
      std::find(suite_names().begin(), suite_names().end(), opts.suite) == suite_names().end()) {
    throw SelectorError("unknown suite '" + opts.suite + "'");
  }
  if (opts.m) catalog::model_Pm(*opts.m);  // rejects the linear models
  Builder b(opts);
  add_sym(b);
  add_structure(b);
  add_maps(b);
  add_dihedral(b);
  add_invariants(b);
  add_growth(b);
  add_weyl(b);
  std::sort(b.defs.begin(), b.defs.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  return b.defs;
}

std::vector<CheckReport> run(const RunOptions& opts) { return run(registry(opts), opts); }

std::vector<CheckReport> run(const std::vector<CheckDef>& defs, const RunOptions& opts) {
  std::vector<CheckReport> out(defs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < defs.size(); i = next++) {
      const CheckDef& d = defs[i];
      CheckReport& r = out[i];
      r.id = d.id;
      r.suite = d.suite;
      r.description = d.description;
      r.criterion = d.criterion;
      r.inputs = d.inputs;
      r.seed = check_seed(d.id, opts.seed);
      ZeroTestConfig cfg;
      cfg.samples = opts.samples;
      cfg.tol = opts.tol;
      cfg.seed = r.seed;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Outcome o = d.run(cfg);
        r.status = o.pass ? Status::Pass : Status::Fail;
        r.residual = o.residual;
        r.samples = o.samples;
        r.message = o.message;
      } catch (const sym::DomainTooSmall& e) {
        r.status = Status::SkippedDomain;
        r.message = e.what();
      } catch (const std::exception& e) {
        r.status = Status::Fail;
        r.message = e.what();
      }
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  unsigned n = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, defs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  return out;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["suite"] = r.suite;
  j["criterion"] = r.criterion;
  j["description"] = r.description;
  j["inputs"] = r.inputs;
  j["status"] = to_string(r.status);
  j["residual"] = r.residual;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

nlohmann::json to_json(const std::vector<CheckReport>& rs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

}  // namespace monge::checks
