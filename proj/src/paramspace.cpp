#include "monge/paramspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "monge/parse.hpp"

namespace monge::param {

std::string format_rational(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::string KleinFour::str() const {
  if (a && b) return "ab";
  if (a) return "a";
  if (b) return "b";
  return "e";
}

Dih4 Dih4::from_index(int i) {
  if (i < 0 || i > 7) throw std::out_of_range("Dih4 index");
  return Dih4(i / 4, i % 4);
}

std::array<Dih4, 8> Dih4::all() {
  std::array<Dih4, 8> out;
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = from_index(i);
  return out;
}

Dih4 Dih4::word(std::string_view w) {
  Dih4 g;
  for (char c : w) {
    if (c == 'a') {
      g = g * a();
    } else if (c == 'b') {
      g = g * b();
    } else {
      throw std::invalid_argument("Dih4 words use only 'a' and 'b'");
    }
  }
  return g;
}

Dih4 Dih4::operator*(const Dih4& o) const {
  // (s^e1 r^i)(s^e2 r^j) = s^(e1+e2) r^((-1)^e2 i + j)
  int i = (o.e_ ? -i_ : i_) + o.i_;
  return Dih4((e_ + o.e_) % 2, ((i % 4) + 4) % 4);
}

Dih4 Dih4::inverse() const {
  for (const auto& g : all()) {
    if ((*this * g).index() == 0) return g;
  }
  return *this;
}

int Dih4::order() const {
  Dih4 g = *this;
  int k = 1;
  while (g.index() != 0) {
    g = g * *this;
    ++k;
  }
  return k;
}

KleinFour Dih4::project() const { return {(e_ + i_) % 2 == 1, i_ % 2 == 1}; }

std::string Dih4::str() const {
  static const char* names[8] = {"e", "ab", "abab", "ba", "a", "b", "bab", "aba"};
  return names[index()];
}

bool SubgroupReport::ok() const {
  return z4_normal && kernel_is_center && homomorphism && g1_image.size() == 2 &&
         g2_image.size() == 2;
}

namespace {

std::vector<Dih4> generated(std::vector<Dih4> gens) {
  std::vector<Dih4> set{Dih4::e()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (const auto& g : gens) {
        Dih4 h = set[i] * g;
        if (std::find(set.begin(), set.end(), h) == set.end()) {
          set.push_back(h);
          grew = true;
        }
      }
    }
  }
  return set;
}

std::vector<std::string> image(const std::vector<Dih4>& sub) {
  std::vector<std::string> out;
  for (const auto& g : sub) {
    std::string s = g.project().str();
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SubgroupReport subgroup_report() {
  SubgroupReport r;
  auto z4 = generated({Dih4::word("ab")});
  bool normal = true;
  for (const auto& g : Dih4::all()) {
    for (const auto& h : z4) {
      Dih4 c = g * h * g.inverse();
      if (std::find(z4.begin(), z4.end(), c) == z4.end()) normal = false;
    }
  }
  r.z4_normal = z4.size() == 4 && normal;
  std::vector<int> kernel;
  for (const auto& g : Dih4::all()) {
    if (g.project() == KleinFour::e()) kernel.push_back(g.index());
  }
  r.kernel_is_center = kernel == std::vector<int>{0, Dih4::zeta().index()};
  r.homomorphism = true;
  for (const auto& g : Dih4::all()) {
    for (const auto& h : Dih4::all()) {
      if (!((g * h).project() == g.project() * h.project())) r.homomorphism = false;
    }
  }
  r.g1_image = image(generated({Dih4::a(), Dih4::zeta()}));
  r.g2_image = image(generated({Dih4::b(), Dih4::zeta()}));
  return r;
}

Rational act(KleinFour g, const Rational& m) {
  Rational out = m;
  if (g.a) out = 1 - out;
  if (g.b) {
    Rational d = 2 * out - 1;
    if (sgn(d) == 0) throw ExcludedPoint("excluded point m = 1/2");
    out = out / d;
  }
  out.canonicalize();
  return out;
}

Rational act_k(KleinFour g, const Rational& k) {
  Rational out = k;
  if (g.a) out = -out;
  if (g.b) {
    if (sgn(out) == 0) throw ExcludedPoint("excluded point k = 0");
    out = 1 / out;
  }
  out.canonicalize();
  return out;
}

namespace {

template <class Act>
RationalOrbit rational_orbit(const Rational& x, Act act_fn) {
  RationalOrbit o;
  for (const auto& g : KleinFour::all()) {
    Rational y = act_fn(g, x);
    if (std::find(o.elements.begin(), o.elements.end(), y) == o.elements.end()) o.elements.push_back(y);
    if (y == x) o.stabilizer.push_back(g);
  }
  return o;
}

}  // namespace

RationalOrbit orbit_k(const Rational& k) {
  if (sgn(k) == 0) throw ExcludedPoint("excluded point k = 0");
  RationalOrbit o = rational_orbit(k, act_k);
  // Interval domain k in [0, 1].
  for (const auto& y : o.elements) {
    if (sgn(y) >= 0 && y <= 1) {
      o.canonical = y;
      break;
    }
  }
  return o;
}

RationalOrbit orbit_m(const Rational& m) {
  if (2 * m == 1) throw ExcludedPoint("excluded point m = 1/2");
  RationalOrbit o = rational_orbit(m, act);
  // k = 2m - 1 in [0, 1], i.e. m in [1/2, 1].
  for (const auto& y : o.elements) {
    if (2 * y >= 1 && y <= 1) {
      o.canonical = y;
      break;
    }
  }
  return o;
}

bool Kappa::close_to(const Kappa& o, double tol) const {
  if (infinite || o.infinite) return infinite == o.infinite;
  return std::abs(value - o.value) <= tol * (1 + std::abs(value));
}

std::string Kappa::str() const {
  if (infinite) return "inf";
  std::ostringstream os;
  os.precision(12);
  double re = value.real() == 0 ? 0.0 : value.real();
  double im = value.imag() == 0 ? 0.0 : value.imag();
  os << re;
  if (im != 0) os << (im > 0 ? "+" : "-") << std::abs(im) << "i";
  return os.str();
}

Kappa act_kappa(KleinFour g, const Kappa& k) {
  Kappa out = k;
  if (g.a && !out.infinite) out.value = -out.value;
  if (g.b) {
    if (out.infinite) {
      out = Kappa::of({0, 0});
    } else if (out.value == Cplx(0, 0)) {
      out = Kappa::inf();
    } else {
      out.value = 1.0 / out.value;
    }
  }
  if (!out.infinite) {
    // normalize signed zeros for stable printing and comparison
    out.value = {out.value.real() + 0.0, out.value.imag() + 0.0};
  }
  return out;
}

KappaOrbit orbit_kappa(const Kappa& k) {
  KappaOrbit o;
  for (const auto& g : KleinFour::all()) {
    Kappa y = act_kappa(g, k);
    bool seen = std::any_of(o.elements.begin(), o.elements.end(),
                            [&](const Kappa& e) { return e.close_to(y); });
    if (!seen) o.elements.push_back(y);
    if (y.close_to(k)) o.stabilizer.push_back(g);
  }
  o.canonical = canonical_kappa(k);
  return o;
}

Kappa canonical_kappa(const Kappa& k) {
  constexpr double eps = 1e-12;
  std::optional<Kappa> best;
  for (const auto& g : KleinFour::all()) {
    Kappa y = act_kappa(g, k);
    if (y.infinite) continue;
    if (std::abs(y.value) > 1 + eps || y.value.real() < -eps) continue;
    if (!best) {
      best = y;
      continue;
    }
    double dr = y.value.real() - best->value.real();
    if (dr < -eps || (std::abs(dr) <= eps && y.value.imag() < best->value.imag() - eps)) best = y;
  }
  return best ? *best : k;
}

Kappa parse_kappa(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s == "inf" || s == "oo" || s == "infinity") return Kappa::inf();
  if (s.empty()) throw std::invalid_argument("empty kappa");
  double re = 0, im = 0;
  if (s.back() == 'i') {
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    std::string re_s = split == std::string::npos ? "" : body.substr(0, split);
    std::string im_s = split == std::string::npos ? body : body.substr(split);
    if (im_s.empty() || im_s == "+") im_s = "1";
    if (im_s == "-") im_s = "-1";
    auto to_d = [](const std::string& t) {
      return t.find('/') != std::string::npos ? sym::parse_rational(t).get_d() : std::stod(t);
    };
    if (!re_s.empty()) re = to_d(re_s);
    im = to_d(im_s);
  } else {
    re = s.find('/') != std::string::npos ? sym::parse_rational(s).get_d() : std::stod(s);
  }
  return Kappa::of({re, im});
}

std::vector<Cplx> coeffs_from_roots(const std::vector<Cplx>& a) {
  // poly in s, high to low: start with 1, multiply by (s + a_i^2)
  std::vector<Cplx> p{1.0};
  for (const auto& ai : a) {
    Cplx c = ai * ai;
    std::vector<Cplx> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] += p[i];
      q[i + 1] += p[i] * c;
    }
    p = std::move(q);
  }
  return std::vector<Cplx>(p.begin() + 1, p.end());
}

RootData roots_from_coeffs(const std::vector<Cplx>& r) {
  RootData out;
  out.n = static_cast<int>(r.size());
  out.coeffs = r;
  const auto n = static_cast<Eigen::Index>(r.size());
  if (n == 0) return out;
  // Companion matrix of s^n + r1 s^{n-1} + ... + rn.
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) c(0, j) = -r[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  std::vector<Cplx> s;
  for (Eigen::Index i = 0; i < n; ++i) s.push_back(es.eigenvalues()(i));
  double scale = 1;
  for (const auto& v : s) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (std::abs(s[i] - s[j]) <= 1e-6 * scale) out.multiple = true;
    }
  }
  // Order by the resulting root for reproducible output.
  for (const auto& v : s) out.roots.push_back(std::sqrt(-v));
  for (auto& a : out.roots) {
    if (std::abs(a.imag()) < 1e-12 * scale) a = {a.real(), 0.0};
    if (std::abs(a.real()) < 1e-12 * scale) a = {0.0, a.imag()};
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Cplx& x, const Cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

std::vector<std::vector<Cplx>> signed_permutations(const std::vector<Cplx>& a) {
  std::vector<std::vector<Cplx>> out;
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<Cplx> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = ((mask >> i) & 1 ? -1.0 : 1.0) * a[perm[i]];
      out.push_back(std::move(v));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<std::vector<Cplx>> weyl_orbit(const std::vector<Cplx>& a, double tol) {
  std::vector<std::vector<Cplx>> out;
  for (auto v : signed_permutations(a)) {
    auto lead = std::find_if(v.begin(), v.end(), [&](const Cplx& c) { return std::abs(c) > tol; });
    if (lead != v.end()) {
      Cplx d = *lead;
      for (auto& c : v) c /= d;
    }
    bool seen = std::any_of(out.begin(), out.end(), [&](const std::vector<Cplx>& w) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(w[i] - v[i]) > tol) return false;
      }
      return true;
    });
    if (!seen) out.push_back(std::move(v));
  }
  return out;
}

bool arithmetic_stratum(const std::vector<Cplx>& a, double tol) {
  std::vector<Cplx> vals;
  double scale = 0;
  bool real = true;
  for (const auto& v : a) {
    vals.push_back(v);
    vals.push_back(-v);
    scale = std::max(scale, std::abs(v));
    if (std::abs(v.imag()) > tol * (1 + std::abs(v))) real = false;
  }
  if (vals.empty()) return false;
  const double eps = tol * std::max(scale, 1.0);
  if (real) {
    std::vector<double> r;
    for (const auto& v : vals) r.push_back(v.real());
    std::sort(r.begin(), r.end());
    double step = r[1] - r[0];
    for (std::size_t i = 2; i < r.size(); ++i) {
      if (std::abs((r[i] - r[i - 1]) - step) > eps) return false;
    }
    return true;
  }
  if (a.size() > 4) throw std::invalid_argument("complex arithmetic-stratum test supports n <= 4");
  const std::size_t m = vals.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      Cplx step = vals[j] - vals[i];
      std::vector<bool> used(m, false);
      used[i] = used[j] = true;
      Cplx last = vals[j];
      std::size_t count = 2;
      bool ok = true;
      while (count < m && ok) {
        Cplx want = last + step;
        ok = false;
        for (std::size_t k = 0; k < m; ++k) {
          if (!used[k] && std::abs(vals[k] - want) <= eps) {
            used[k] = true;
            last = vals[k];
            ++count;
            ok = true;
            break;
          }
        }
      }
      if (ok && count == m) return true;
    }
  }
  return false;
}

}  // namespace monge::param
