#include "monge/catalog.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "monge/paramspace.hpp"
#include "monge/parse.hpp"

namespace monge::catalog {

using jet::Chart;
using nlohmann::json;

const VectorField& MongeModel::field(std::string_view fname) const {
  for (const auto& v : symmetries) {
    if (v.name == fname) return v;
  }
  for (const auto& v : derived) {
    if (v.name == fname) return v;
  }
  throw std::out_of_range("model " + name + " has no field " + std::string(fname));
}

namespace {

using param::format_rational;

// Field from component strings with parameters substituted.
VectorField field(const Chart& c, std::string name, const std::vector<std::string>& comps,
                  const sym::Bindings& params = {}) {
  std::vector<Expr> es;
  for (const auto& s : comps) es.push_back(sym::subst(sym::parse(s), params));
  return VectorField::from(c, std::move(es), std::move(name));
}

sym::Bindings bind(std::initializer_list<std::pair<const char*, Rational>> vals) {
  sym::Bindings b;
  for (const auto& [k, v] : vals) b[k] = Expr(v);
  return b;
}

MongeModel pm_with(const Expr& m_expr, bool half, const sym::Bindings& params) {
  MongeModel mm;
  mm.family = "Pm";
  mm.equation = "y' = (z'')^m";
  mm.n = 2;
  mm.chart = Chart::monge(2);
  mm.f = sym::subst(sym::parse("z2^m"), params);
  const Chart& c = mm.chart;
  std::string w7y = half ? "(m-1)*ln(z2)" : "(m-1)*z2^(2*m-1)/(2*m-1)";
  mm.symmetries = {
      field(c, "W1", {"1", "0", "0", "0", "0"}),
      field(c, "W2", {"0", "1", "0", "0", "0"}),
      field(c, "W3", {"0", "0", "1", "0", "0"}),
      field(c, "W4", {"x", "y", "2*z", "z1", "0"}),
      field(c, "W5", {"0", "0", "x", "1", "0"}),
      field(c, "W6", {"0", "m*y", "z", "z1", "z2"}, params),
      field(c, "W7", {"z2^(m-1)", w7y, "z1*z2^(m-1) - y/m", "(1-1/m)*z2^m", "0"}, params),
  };
  VectorField w6p = mm.symmetries[5] - Expr(sym::rational(1, 2)) * mm.symmetries[3];
  w6p.name = "W6'";
  mm.derived.push_back(std::move(w6p));
  (void)m_expr;
  return mm;
}

}  // namespace

MongeModel model_Pm(const Rational& m) {
  if (sgn(m) == 0 || m == 1) {
    throw ModelError("linear model excluded: m = " + format_rational(m) +
                     " gives an infinite-dimensional symmetry algebra");
  }
  auto params = bind({{"m", m}});
  MongeModel mm = pm_with(Expr(m), 2 * m == 1, params);
  mm.name = "P[" + format_rational(m) + "]";
  mm.params["m"] = m;
  return mm;
}

MongeModel model_Pm_symbolic() {
  MongeModel mm = pm_with(Expr::parameter("m"), false, {});
  mm.name = "P[m]";
  return mm;
}

MongeModel model_higher(int n, const std::vector<Rational>& coeffs) {
  if (n < 2) throw ModelError("Monge order must be at least 2");
  if (static_cast<int>(coeffs.size()) != n) {
    throw ModelError("expected " + std::to_string(n) + " coefficients");
  }
  MongeModel mm;
  mm.family = "higher";
  mm.n = n;
  mm.chart = Chart::monge(n);
  mm.equation = "y' = (z^(n))^2 + r1 (z^(n-1))^2 + ... + rn z^2";
  std::vector<Expr> terms;
  auto jet_var = [](int k) { return Expr::variable(k == 0 ? "z" : "z" + std::to_string(k)); };
  terms.push_back(sym::pow(jet_var(n), Expr(2)));
  std::string label;
  for (int i = 1; i <= n; ++i) {
    const Rational& r = coeffs[static_cast<std::size_t>(i - 1)];
    terms.push_back(Expr(r) * sym::pow(jet_var(n - i), Expr(2)));
    mm.params["r" + std::to_string(i)] = r;
    label += (i > 1 ? "," : "") + format_rational(r);
  }
  mm.f = sym::add(std::move(terms));
  mm.name = "higher[" + std::to_string(n) + ";" + label + "]";
  return mm;
}

MongeModel model_Q(const Rational& r1, const Rational& r2) {
  MongeModel mm = model_higher(2, {r1, r2});
  mm.family = "Q";
  mm.equation = "y' = (z'')^2 + r1 (z')^2 + r2 z^2";
  mm.name = "Q[" + format_rational(r1) + "," + format_rational(r2) + "]";
  return mm;
}

VectorField xi_field(const Rational& a, const Rational& b, std::string name) {
  auto p = bind({{"a", a}, {"b", b}});
  return field(Chart::monge(2), std::move(name),
               {"0", "exp(b*x)*2*b*(a^2*z + b*z1)", "exp(b*x)", "b*exp(b*x)", "b^2*exp(b*x)"}, p);
}

MongeModel model_Qab(const Rational& a, const Rational& b) {
  if (a == b) throw ModelError("singular: a=b (use the NS model)");
  if (a == -b) throw ModelError("singular: a=-b");
  if (sgn(a) == 0 || sgn(b) == 0) throw ModelError("singular: a*b=0");
  if (a == 3 * b || a == -3 * b || b == 3 * a || b == -3 * a) {
    throw ModelError("G2 stratum: a:b = " + format_rational(a / b) +
                     " gives r2 = 9/100 r1^2");
  }
  MongeModel mm = model_Q(a * a + b * b, a * a * b * b);
  mm.family = "Qab";
  mm.equation = "y' = (z'')^2 + (a^2+b^2)(z')^2 + a^2 b^2 z^2";
  mm.name = "Q[" + format_rational(a) + ":" + format_rational(b) + "]";
  mm.params = {{"a", a}, {"b", b}, {"r1", a * a + b * b}, {"r2", a * a * b * b}};
  const Chart& c = mm.chart;
  mm.symmetries = {
      xi_field(-a, -b, "U1"),
      xi_field(-b, -a, "U2"),
      field(c, "U3", {"0", "1", "0", "0", "0"}),
      field(c, "U4", {"0", "2*y", "z", "z1", "z2"}),
      xi_field(a, b, "U5"),
      field(c, "U6", {"1", "0", "0", "0", "0"}),
      xi_field(b, a, "U7"),
  };
  return mm;
}

MongeModel model_N12() {
  MongeModel mm = model_Q(1, 0);
  mm.family = "N12";
  mm.name = "N12";
  mm.equation = "y' = (z'')^2 + (z')^2";
  const Chart& c = mm.chart;
  // (a, b) = (1, 0): xi(-1, 0) = xi(1, 0) = d/dz, so U5 repeats U1.
  mm.symmetries = {
      xi_field(-1, 0, "U1"),
      xi_field(0, -1, "U2"),
      field(c, "U3", {"0", "1", "0", "0", "0"}),
      field(c, "U4", {"0", "2*y", "z", "z1", "z2"}),
      field(c, "U6", {"1", "0", "0", "0", "0"}),
      xi_field(0, 1, "U7"),
      field(c, "U7~", {"0", "2*z", "x", "1", "0"}),
  };
  return mm;
}

MongeModel model_NS() {
  MongeModel mm = model_Q(2, 1);
  mm.family = "NS";
  mm.name = "NS";
  mm.equation = "y' = (z'')^2 + 2(z')^2 + z^2";
  const Chart& c = mm.chart;
  mm.symmetries = {
      field(c, "U1", {"0", "exp(x)*2*((x+1)*z1 + (x-2)*z)", "exp(x)*(x-1)", "exp(x)*x",
                      "exp(x)*(x+1)"}),
      field(c, "U2", {"0", "exp(x)*2*(z1+z)", "exp(x)", "exp(x)", "exp(x)"}),
      field(c, "U3", {"0", "8", "0", "0", "0"}),
      field(c, "U4", {"0", "2*y", "z", "z1", "z2"}),
      field(c, "U5", {"0", "exp(-x)*2*(z1-z)", "exp(-x)", "-exp(-x)", "exp(-x)"}),
      field(c, "U6", {"1", "0", "0", "0", "0"}),
      field(c, "U7", {"0", "exp(-x)*2*((x-2)*z1 - (x+1)*z)", "exp(-x)*x", "-exp(-x)*(x-1)",
                      "exp(-x)*(x-2)"}),
  };
  return mm;
}

MongeModel model_ln() {
  MongeModel mm;
  mm.family = "ln";
  mm.name = "ln";
  mm.equation = "y' = ln(z'')";
  mm.n = 2;
  mm.chart = Chart::monge(2);
  mm.f = sym::parse("ln(z2)");
  const Chart& c = mm.chart;
  mm.symmetries = {
      field(c, "V1", {"-1/z2", "-(ln(z2)+1)/z2", "(y*z2 - z1)/z2", "ln(z2) - 1", "0"}),
      field(c, "V2", {"0", "0", "-2*x", "-2", "0"}),
      field(c, "V3", {"0", "0", "-2", "0", "0"}),
      field(c, "V4", {"x", "y", "2*z", "z1", "0"}),
      field(c, "V5", {"0", "2", "0", "0", "0"}),
      field(c, "V6", {"x", "y - 2*x", "0", "-z1", "-2*z2"}),
      field(c, "V7", {"1", "0", "0", "0", "0"}),
  };
  return mm;
}

MongeModel model_exp() {
  MongeModel mm;
  mm.family = "exp";
  mm.name = "exp";
  mm.equation = "y' = exp(z'')";
  mm.n = 2;
  mm.chart = Chart::monge(2);
  mm.f = sym::parse("exp(z2)");
  const Chart& c = mm.chart;
  mm.symmetries = {
      field(c, "V1", {"0", "1/2", "0", "0", "0"}),
      field(c, "V2", {"0", "0", "-x", "-1", "0"}),
      field(c, "V3", {"0", "0", "-1/2", "0", "0"}),
      field(c, "V4", {"x", "y", "2*z", "z1", "0"}),
      field(c, "V5", {"exp(z2)", "exp(2*z2)/2", "-(y - z1*exp(z2))", "(z2-1)*exp(z2)", "0"}),
      field(c, "V6", {"0", "-y/2", "-x^2/4", "-x/2", "-1/2"}),
      field(c, "V7", {"1", "0", "0", "0", "0"}),
  };
  return mm;
}

MongeModel model_Qnm(const Rational& m) {
  const Rational a = sym::rational(1, 2);
  const Rational b = m - a;
  MongeModel mm = model_Q(a * a + b * b, a * a * b * b);
  try {
    mm.symmetries = model_Qab(a, b).symmetries;
  } catch (const ModelError&) {
    mm.symmetries.clear();
  }
  mm.family = "Qnm";
  mm.name = "Qnm[" + format_rational(m) + "]";
  mm.equation = "y' = (z'')^2 + (m^2-m+1/2)(z')^2 + 1/4 (m-1/2)^2 z^2";
  mm.params = {{"m", m}, {"a", a}, {"b", b}, {"r1", a * a + b * b}, {"r2", a * a * b * b}};
  return mm;
}

std::vector<MongeModel> submaximal_models() {
  std::vector<MongeModel> out;
  for (auto m : {Rational(2), Rational(3), Rational(-1), sym::rational(1, 4), sym::rational(1, 2),
                 Rational(5)}) {
    out.push_back(model_Pm(m));
  }
  out.push_back(model_Qab(2, 1));
  out.push_back(model_Qab(1, 4));
  out.push_back(model_Qab(5, 2));
  out.push_back(model_N12());
  out.push_back(model_ln());
  out.push_back(model_NS());
  out.push_back(model_exp());
  return out;
}

MongeModel model_from_spec(const ModelSpec& s) {
  auto need = [&](const std::optional<Rational>& v, const char* what) -> const Rational& {
    if (!v) throw ModelError("model " + s.name + " needs --" + what);
    return *v;
  };
  if (s.name == "Pm" || s.name == "P") return model_Pm(need(s.m, "m"));
  if (s.name == "Q") return model_Q(need(s.r1, "r1"), need(s.r2, "r2"));
  if (s.name == "Qab") return model_Qab(need(s.a, "a"), need(s.b, "b"));
  if (s.name == "N12") return model_N12();
  if (s.name == "ln") return model_ln();
  if (s.name == "NS") return model_NS();
  if (s.name == "exp") return model_exp();
  if (s.name == "Qnm") return model_Qnm(need(s.m, "m"));
  if (s.name == "higher") {
    int n = s.n ? *s.n : static_cast<int>(s.coeffs.size());
    return model_higher(n, s.coeffs);
  }
  if (s.name.size() > 5 && s.name.substr(s.name.size() - 5) == ".json") return load_model_file(s.name);
  throw ModelError("unknown model '" + s.name + "'");
}

MongeModel load_model_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  MongeModel mm;
  mm.family = "user";
  mm.name = j.value("name", std::string("user"));
  mm.n = j.value("n", 2);
  if (mm.n < 2) throw ModelError("Monge order must be at least 2");
  mm.chart = Chart::monge(mm.n);
  if (!j.contains("rhs")) throw ModelError("model file needs an 'rhs' expression");
  mm.equation = "y' = " + j["rhs"].get<std::string>();
  sym::Bindings params;
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) {
      Rational q = v.is_string() ? sym::parse_rational(v.get<std::string>())
                 : v.is_number_integer() ? Rational(v.get<long>())
                                         : sym::parse_rational(v.dump());
      params[k] = Expr(q);
      mm.params[k] = q;
    }
  }
  auto parse_in = [&](const std::string& s) {
    Expr e = sym::subst(sym::parse(s), params);
    for (const auto& name : sym::free_symbols(e)) {
      if (sym::is_jet_variable_name(name) && mm.chart.index_of(name) < 0) {
        throw ModelError("symbol " + name + " is outside the order-" + std::to_string(mm.n) +
                         " chart");
      }
    }
    return e;
  };
  mm.f = parse_in(j["rhs"].get<std::string>());
  if (j.contains("symmetries")) {
    int idx = 0;
    for (const auto& s : j["symmetries"]) {
      ++idx;
      std::string fname = "S" + std::to_string(idx);
      json comps = s;
      if (s.is_object()) {
        fname = s.value("name", fname);
        comps = s.at("components");
      }
      std::vector<Expr> es;
      for (const auto& c : comps) es.push_back(parse_in(c.get<std::string>()));
      if (es.size() != mm.chart.dim()) {
        throw ModelError("symmetry " + fname + " needs " + std::to_string(mm.chart.dim()) +
                         " components");
      }
      mm.symmetries.push_back(VectorField::from(mm.chart, std::move(es), fname));
    }
  }
  return mm;
}

MongeModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model_json(ss.str());
}

}  // namespace monge::catalog
