// Command-line front end: verification suites and thin wrappers over the
// library operations.  Exit codes: 0 success, 1 failed checks, 2 bad input.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "monge/catalog.hpp"
#include "monge/checks.hpp"
#include "monge/equiv.hpp"
#include "monge/lie.hpp"
#include "monge/paramspace.hpp"
#include "monge/parse.hpp"

using namespace monge;
using nlohmann::json;
using sym::Rational;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct JsonOut {
  CLI::Option* opt = nullptr;
  std::string path;
  bool wanted() const { return opt && opt->count() > 0; }
  bool to_stdout() const { return wanted() && (path.empty() || path == "-"); }
};

void add_json(CLI::App* app, JsonOut& out) {
  out.opt = app->add_option("--json", out.path, "write a JSON report (to stdout without a path)")
                ->expected(0, 1);
}

// Prints `human` unless JSON goes to stdout, and writes `j` when requested.
void emit(const JsonOut& out, const json& j, const std::string& human) {
  if (out.to_stdout()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << human;
  if (out.wanted()) {
    std::ofstream f(out.path);
    if (!f) throw UsageError("cannot write " + out.path);
    f << j.dump(2) << "\n";
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<param::Cplx> complex_list(const std::string& s) {
  std::vector<param::Cplx> out;
  for (const auto& item : split(s)) {
    const auto k = param::parse_kappa(item);
    if (k.infinite) throw UsageError("infinite entry in " + s);
    out.push_back(k.value);
  }
  return out;
}

std::string fmt(long double v) {
  std::ostringstream os;
  os << std::setprecision(15) << static_cast<double>(v);
  return os.str();
}

std::string fmt(const std::complex<long double>& v) {
  if (std::abs(v.imag()) <= 1e-15L * (1 + std::abs(v.real()))) return fmt(v.real());
  return fmt(v.real()) + (v.imag() < 0 ? "-" : "+") + fmt(std::abs(v.imag())) + "i";
}

std::string fmt(const param::Cplx& v) {
  return fmt(std::complex<long double>(v.real(), v.imag()));
}

std::string joined(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

struct ModelArgs {
  std::string model;
  std::string m, a, b, r1, r2, coeffs;
  int n = 0;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "Pm, Q, Qab, N12, ln, NS, exp, Qnm, higher or a .json file")
        ->required();
    app->add_option("--m", m, "parameter m");
    app->add_option("--a", a, "parameter a");
    app->add_option("--b", b, "parameter b");
    app->add_option("--r1", r1, "coefficient r1");
    app->add_option("--r2", r2, "coefficient r2");
    app->add_option("--n", n, "Monge order for model higher");
    app->add_option("--coeffs", coeffs, "r1,...,rn for model higher");
  }

  catalog::MongeModel build() const {
    catalog::ModelSpec s;
    s.name = model;
    auto opt = [](const std::string& v) -> std::optional<Rational> {
      if (v.empty()) return std::nullopt;
      return sym::parse_rational(v);
    };
    s.m = opt(m);
    s.a = opt(a);
    s.b = opt(b);
    s.r1 = opt(r1);
    s.r2 = opt(r2);
    if (n > 0) s.n = n;
    if (!coeffs.empty()) {
      for (const auto& c : split(coeffs)) s.coeffs.push_back(sym::parse_rational(c));
    }
    return catalog::model_from_spec(s);
  }
};

void print_checks(const std::vector<checks::CheckDef>& defs) {
  for (const auto& d : defs) {
    std::cout << d.id << "  [" << d.suite;
    if (d.criterion) std::cout << ", AC" << d.criterion;
    std::cout << "]  " << d.description << "\n";
  }
}

int cmd_verify(const checks::RunOptions& opts, const JsonOut& jout) {
  const auto reports = checks::run(opts);
  std::ostringstream human;
  int failed = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.status == checks::Status::Fail) ++failed;
    if (r.status == checks::Status::SkippedDomain) ++skipped;
    human << std::left << std::setw(15) << ("[" + checks::to_string(r.status) + "]") << r.id;
    if (r.residual != 0) human << "  residual=" << std::setprecision(3) << r.residual;
    if (r.status != checks::Status::Pass && !r.message.empty()) human << "  " << r.message;
    human << "\n";
  }
  human << reports.size() << " checks, " << reports.size() - static_cast<std::size_t>(failed + skipped)
        << " passed, " << failed << " failed, " << skipped << " skipped\n";
  emit(jout, checks::to_json(reports), human.str());
  return failed + skipped == 0 ? 0 : 1;
}

json ext_json(const lie::ExtendedReal& e) {
  json j;
  if (e.pole) {
    j["value"] = "formula pole";
  } else if (e.infinite) {
    j["value"] = "inf";
  } else {
    j["value"] = param::format_rational(e.value);
  }
  j["g2"] = e.g2;
  return j;
}

int cmd_invariant(const std::string& m, const std::string& k, const std::string& r1,
                  const std::string& r2, const std::string& a, const std::string& b,
                  const JsonOut& jout) {
  json j;
  std::ostringstream h;
  if (!m.empty() || !k.empty()) {
    const Rational mv = !m.empty() ? sym::parse_rational(m) : (sym::parse_rational(k) + 1) / 2;
    const auto rec = lie::invariant_record(mv);
    j["m"] = param::format_rational(rec.m);
    j["k"] = param::format_rational(rec.k);
    j["J"] = param::format_rational(rec.J);
    j["I2"] = ext_json(rec.I2);
    j["residual_25J_9(1+1/I2)"] = rec.consistency_defined ? param::format_rational(rec.consistency) : "undefined";
    j["flag"] = rec.g2 ? "G2" : "";
    h << "m = " << param::format_rational(rec.m) << "\nk = " << param::format_rational(rec.k)
      << "\nJ = " << param::format_rational(rec.J) << "\nI2 = " << rec.I2.str()
      << "\n25J - 9(1 + 1/I2) = "
      << (rec.consistency_defined ? param::format_rational(rec.consistency) : "undefined") << "\n";
    if (rec.g2) h << "flag: G2\n";
  } else {
    Rational q1, q2;
    if (!a.empty() && !b.empty()) {
      const Rational av = sym::parse_rational(a), bv = sym::parse_rational(b);
      q1 = av * av + bv * bv;
      q2 = av * av * bv * bv;
    } else if (!r1.empty() && !r2.empty()) {
      q1 = sym::parse_rational(r1);
      q2 = sym::parse_rational(r2);
    } else {
      throw UsageError("invariant needs --m, --k, --r1/--r2 or --a/--b");
    }
    const auto i2 = lie::invariant_I2_q(q1, q2);
    j["r1"] = param::format_rational(q1);
    j["r2"] = param::format_rational(q2);
    j["I2"] = ext_json(i2);
    j["flag"] = i2.g2 ? "G2" : "";
    h << "r1 = " << param::format_rational(q1) << "\nr2 = " << param::format_rational(q2)
      << "\nI2 = " << i2.str() << "\n";
    if (!i2.infinite && !i2.pole && sgn(i2.value) != 0) {
      // J from 25 J = 9 (1 + 1/I2).
      const Rational jv = Rational(9, 25) * (1 + 1 / i2.value);
      j["J"] = param::format_rational(jv);
      h << "J = " << param::format_rational(jv) << "\n";
    } else if (i2.infinite) {
      j["J"] = "9/25";
      h << "J = 9/25\n";
    }
    if (i2.g2) h << "flag: G2\n";
  }
  emit(jout, j, h.str());
  return 0;
}

std::vector<std::string> kleinfour_names(const std::vector<param::KleinFour>& gs) {
  std::vector<std::string> out;
  for (const auto& g : gs) out.push_back(g.str());
  return out;
}

int cmd_orbit(const std::string& m, const std::string& k, const std::string& kappa,
              const JsonOut& jout) {
  json j;
  std::ostringstream h;
  if (!kappa.empty()) {
    const auto o = param::orbit_kappa(param::parse_kappa(kappa));
    std::vector<std::string> els;
    for (const auto& e : o.elements) els.push_back(e.str());
    j["orbit"] = els;
    j["stabilizer"] = kleinfour_names(o.stabilizer);
    j["canonical"] = o.canonical.str();
    h << joined(els) << "\nstabilizer: " << joined(kleinfour_names(o.stabilizer))
      << "\ncanonical: " << o.canonical.str() << "\n";
  } else if (!m.empty() || !k.empty()) {
    const bool use_m = !m.empty();
    const auto o = use_m ? param::orbit_m(sym::parse_rational(m)) : param::orbit_k(sym::parse_rational(k));
    std::vector<std::string> els;
    for (const auto& e : o.elements) els.push_back(param::format_rational(e));
    j["orbit"] = els;
    j["stabilizer"] = kleinfour_names(o.stabilizer);
    j["canonical"] = param::format_rational(o.canonical);
    h << joined(els) << "\nstabilizer: " << joined(kleinfour_names(o.stabilizer))
      << "\ncanonical: " << param::format_rational(o.canonical) << "\n";
  } else {
    throw UsageError("orbit needs --m, --k or --kappa");
  }
  emit(jout, j, h.str());
  return 0;
}

std::optional<Rational> opt_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return sym::parse_rational(s);
}

int cmd_map(const std::string& name, const std::string& m, const std::string& point,
            const JsonOut& jout) {
  const auto t = equiv::builtin(name, opt_rational(m));
  if (point.empty()) {
    json j;
    j["name"] = t.name;
    j["source"] = t.source_fiber;
    j["target"] = t.target_fiber;
    std::ostringstream h;
    h << t.name << ": " << t.source_fiber << " -> " << t.target_fiber << "\n";
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < t.comps.size(); ++i) {
      comps.push_back(t.comps[i].str());
      h << "  " << t.target.vars[i] << "bar = " << t.comps[i] << "\n";
    }
    j["components"] = comps;
    if (t.lift) j["lift"] = t.lift->str();
    emit(jout, j, h.str());
    return 0;
  }
  std::vector<sym::Complex> p;
  for (const auto& c : complex_list(point)) p.emplace_back(c.real(), c.imag());
  const auto img = t.apply(p);
  std::vector<std::string> vals;
  for (const auto& v : img) vals.push_back(fmt(v));
  json j;
  j["name"] = t.name;
  j["point"] = point;
  j["image"] = vals;
  emit(jout, j, joined(vals, ",") + "\n");
  return 0;
}

int cmd_map_check(const std::string& name, const std::string& m, const sym::ZeroTestConfig& cfg,
                  const JsonOut& jout) {
  const auto mv = opt_rational(m);
  const auto t = equiv::builtin(name, mv);
  const auto pair = equiv::builtin_models(name, mv);
  const auto rep = equiv::check_equivalence(t, pair.source, pair.target, cfg);
  json j;
  j["name"] = name;
  j["source"] = pair.source.name;
  j["target"] = pair.target.name;
  j["status"] = rep.ok ? "pass" : "fail";
  j["pushforward_residual"] = rep.pushforward.residual;
  j["jacobian_ok"] = rep.pushforward.jacobian_ok;
  j["ybar1_residual"] = rep.ybar1_residual;
  j["samples"] = rep.samples;
  j["seed"] = cfg.seed;
  std::ostringstream h;
  h << name << ": " << pair.source.name << " -> " << pair.target.name << "  "
    << (rep.ok ? "pass" : "fail") << "\n  pushforward residual " << rep.pushforward.residual
    << (rep.pushforward.jacobian_ok ? "" : " (Jacobian degenerate)") << "\n  ybar1 residual "
    << rep.ybar1_residual << "\n  samples " << rep.samples << "\n";
  emit(jout, j, h.str());
  return rep.ok ? 0 : 1;
}

int cmd_structure(const ModelArgs& args, const sym::ZeroTestConfig& cfg, const JsonOut& jout) {
  const auto mm = args.build();
  if (mm.symmetries.empty()) throw UsageError("model " + mm.name + " has no listed symmetries");
  const auto alg = lie::structure_constants(mm.symmetries, cfg);
  json j;
  std::ostringstream h;
  j["model"] = mm.name;
  j["exact"] = alg.exact;
  j["residual"] = alg.residual;
  std::vector<std::string> names;
  for (const auto& v : alg.basis) names.push_back(v.name);
  j["basis"] = names;
  json brackets = json::array();
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    for (std::size_t k = i + 1; k < alg.dim(); ++k) {
      json row = json::object();
      for (std::size_t l = 0; l < alg.dim(); ++l) {
        if (alg.exact) {
          if (sgn(alg.c[i][k][l]) != 0) row[names[l]] = param::format_rational(alg.c[i][k][l]);
        } else if (std::abs(alg.c_float[i][k][l]) > 1e-12) {
          row[names[l]] = alg.c_float[i][k][l];
        }
      }
      if (!row.empty()) brackets.push_back({{"pair", {names[i], names[k]}}, {"value", row}});
    }
  }
  j["brackets"] = brackets;
  h << mm.name << " (" << (alg.exact ? "exact" : "float") << ", residual " << alg.residual << ")\n";
  for (const auto& line : alg.table()) h << "  " << line << "\n";
  if (alg.exact) {
    const auto ds = lie::derived_series(alg);
    j["derived_series"] = ds;
    j["solvable"] = ds.back() == 0;
    h << "derived series:";
    for (int d : ds) h << " " << d;
    h << (ds.back() == 0 ? " (solvable)" : "") << "\n";
  }
  emit(jout, j, h.str());
  return 0;
}

int cmd_growth(const ModelArgs& args, const std::string& point, const sym::ZeroTestConfig& cfg,
               const JsonOut& jout) {
  const auto mm = args.build();
  const auto d = mm.distribution();
  json j;
  std::ostringstream h;
  j["model"] = mm.name;
  auto record = [&](const sym::EvalContext& ctx) {
    const auto g = jet::growth_vector(d, ctx);
    json row;
    row["growth"] = g.dims;
    row["stable"] = g.stable;
    j["points"].push_back(row);
    h << "(";
    for (std::size_t i = 0; i < g.dims.size(); ++i) h << (i ? "," : "") << g.dims[i];
    h << ")" << (g.stable ? "" : " unstable") << "\n";
  };
  if (!point.empty()) {
    const auto vals = complex_list(point);
    if (vals.size() != d.chart.dim()) throw UsageError("point needs " + std::to_string(d.chart.dim()) + " coordinates");
    sym::EvalContext ctx;
    for (std::size_t i = 0; i < vals.size(); ++i) ctx.set(d.chart.vars[i], {vals[i].real(), vals[i].imag()});
    record(ctx);
  } else {
    std::set<std::string> symbols(d.chart.vars.begin(), d.chart.vars.end());
    sym::for_each_sample(cfg, symbols, record);
  }
  emit(jout, j, h.str());
  return 0;
}

int cmd_weyl(const std::string& roots, const std::string& coeffs, const JsonOut& jout) {
  json j;
  std::ostringstream h;
  std::vector<param::Cplx> a;
  if (!coeffs.empty()) {
    const auto rd = param::roots_from_coeffs(complex_list(coeffs));
    a = rd.roots;
    j["multiple_roots"] = rd.multiple;
  } else if (!roots.empty()) {
    a = complex_list(roots);
  } else {
    throw UsageError("weyl needs --roots or --coeffs");
  }
  std::vector<std::string> rs, cs;
  for (const auto& v : a) rs.push_back(fmt(v));
  for (const auto& v : param::coeffs_from_roots(a)) cs.push_back(fmt(v));
  const auto orbit = param::weyl_orbit(a);
  j["roots"] = rs;
  j["coeffs"] = cs;
  j["orbit_size"] = orbit.size();
  j["arithmetic_stratum"] = a.size() <= 4 || std::all_of(a.begin(), a.end(), [](auto v) { return v.imag() == 0; })
                                ? json(param::arithmetic_stratum(a))
                                : json("n > 4");
  h << "roots: " << joined(rs) << "\ncoeffs: " << joined(cs) << "\nWeyl orbit size: " << orbit.size()
    << "\narithmetic stratum: " << j["arithmetic_stratum"].dump() << "\n";
  emit(jout, j, h.str());
  return 0;
}

int cmd_stratum(const std::string& roots, const JsonOut& jout) {
  if (roots.empty()) throw UsageError("stratum needs --roots");
  const bool s = param::arithmetic_stratum(complex_list(roots));
  json j;
  j["roots"] = roots;
  j["arithmetic_stratum"] = s;
  emit(jout, j, std::string(s ? "true" : "false") + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for Monge equations with submaximal symmetry"};
  app.require_subcommand(0, 1);
  bool list_checks = false;
  app.add_flag("--list-checks", list_checks, "list every check id with its description");

  sym::ZeroTestConfig cfg;
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", cfg.samples, "sample points per identity")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "relative tolerance");
    sub->add_option("--seed", cfg.seed, "random seed");
  };

  // verify
  checks::RunOptions vopts;
  std::string vm;
  JsonOut vjson;
  bool vlist = false;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", vopts.suite, "all, sym, structure, maps, dihedral, invariants, higher, weyl");
  verify->add_option("--samples", vopts.samples, "sample points per identity")->check(CLI::PositiveNumber);
  verify->add_option("--tol", vopts.tol, "relative tolerance");
  verify->add_option("--seed", vopts.seed, "random seed");
  verify->add_option("--m", vm, "run the parametric checks at this m only");
  verify->add_option("--threads", vopts.threads, "worker threads (0: all cores)");
  verify->add_flag("--list-checks", vlist, "list the selected checks and exit");
  add_json(verify, vjson);

  // invariant
  std::string im, ik, ir1, ir2, ia, ib;
  JsonOut ijson;
  auto* invariant = app.add_subcommand("invariant", "J and I^2 for a parameter value");
  invariant->add_option("--m", im);
  invariant->add_option("--k", ik);
  invariant->add_option("--r1", ir1);
  invariant->add_option("--r2", ir2);
  invariant->add_option("--a", ia);
  invariant->add_option("--b", ib);
  add_json(invariant, ijson);

  // orbit
  std::string om, ok, okappa;
  JsonOut ojson;
  auto* orbit = app.add_subcommand("orbit", "orbits of the parameter actions");
  orbit->add_option("--m", om);
  orbit->add_option("--k", ok);
  orbit->add_option("--kappa", okappa, "complex value such as 0.4+0.3i, or inf");
  add_json(orbit, ojson);

  // map
  std::string mname, mm, mpoint;
  JsonOut mjson;
  auto* map = app.add_subcommand("map", "print or apply a builtin map");
  map->add_option("--name", mname, "Ta, Tb, Tzeta, Psi, PsiHalf, PsiBar, Phi, Upsilon, Tcomp, Id")->required();
  map->add_option("--m", mm);
  map->add_option("--point", mpoint, "comma-separated coordinates x,y,z,z1,z2");
  add_json(map, mjson);

  // map-check
  std::string cname, cm;
  JsonOut cjson;
  auto* map_check = app.add_subcommand("map-check", "check a builtin map is an equivalence");
  map_check->add_option("--name", cname)->required();
  map_check->add_option("--m", cm);
  add_sampling(map_check);
  add_json(map_check, cjson);

  // structure
  ModelArgs sargs;
  JsonOut sjson;
  auto* structure = app.add_subcommand("structure", "structure constants of a model's symmetry list");
  sargs.attach(structure);
  add_sampling(structure);
  add_json(structure, sjson);

  // growth
  ModelArgs gargs;
  std::string gpoint;
  JsonOut gjson;
  auto* growth = app.add_subcommand("growth", "growth vector of a model's distribution");
  gargs.attach(growth);
  growth->add_option("--point", gpoint, "comma-separated chart coordinates");
  add_sampling(growth);
  add_json(growth, gjson);

  // weyl / stratum
  std::string wroots, wcoeffs;
  JsonOut wjson;
  auto* weyl = app.add_subcommand("weyl", "roots, coefficients and Weyl orbit");
  weyl->add_option("--roots", wroots);
  weyl->add_option("--coeffs", wcoeffs);
  add_json(weyl, wjson);

  std::string troots;
  JsonOut tjson;
  auto* stratum = app.add_subcommand("stratum", "arithmetic-progression test on roots");
  stratum->add_option("--roots", troots);
  add_json(stratum, tjson);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!vm.empty()) vopts.m = sym::parse_rational(vm);
    if (list_checks || vlist) {
      checks::RunOptions lo = vopts;
      if (!vlist) lo = checks::RunOptions{};
      print_checks(checks::registry(lo));
      return 0;
    }
    if (*verify) return cmd_verify(vopts, vjson);
    if (*invariant) return cmd_invariant(im, ik, ir1, ir2, ia, ib, ijson);
    if (*orbit) return cmd_orbit(om, ok, okappa, ojson);
    if (*map) return cmd_map(mname, mm, mpoint, mjson);
    if (*map_check) return cmd_map_check(cname, cm, cfg, cjson);
    if (*structure) return cmd_structure(sargs, cfg, sjson);
    if (*growth) return cmd_growth(gargs, gpoint, cfg, gjson);
    if (*weyl) return cmd_weyl(wroots, wcoeffs, wjson);
    if (*stratum) return cmd_stratum(troots, tjson);
    std::cout << app.help();
    return 0;
  } catch (const checks::SelectorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const catalog::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sym::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sym::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
