#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "monge/paramspace.hpp"

using namespace monge::param;

namespace {

std::set<std::string> strs(const std::vector<Rational>& v) {
  std::set<std::string> out;
  for (const auto& q : v) out.insert(format_rational(q));
  return out;
}

Rational rq(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

bool close(const std::vector<Cplx>& a, const std::vector<Cplx>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol * (1 + std::abs(b[i]))) return false;
  return true;
}

}  // namespace

TEST_CASE("orbits of m") {
  const auto o = orbit_m(2);
  CHECK(strs(o.elements) == std::set<std::string>{"2", "-1", "2/3", "1/3"});
  CHECK(o.elements.front() == 2);
  CHECK(o.stabilizer.size() == 1);
  CHECK(o.canonical == rq(2, 3));
  CHECK_THROWS_AS(orbit_m(rq(1, 2)), ExcludedPoint);
  CHECK_THROWS_AS(act(KleinFour::gen_b(), rq(1, 2)), ExcludedPoint);
  CHECK(act(KleinFour::gen_a(), rq(1, 2)) == rq(1, 2));
  // m = 0 and m = 1 form one orbit with the pole of b removed
  CHECK(act(KleinFour::gen_b(), 0) == 0);
  CHECK(act(KleinFour::gen_b(), 1) == 1);
}

TEST_CASE("orbits of k") {
  const auto o = orbit_k(3);
  CHECK(strs(o.elements) == std::set<std::string>{"3", "-3", "1/3", "-1/3"});
  const auto one = orbit_k(1);
  CHECK(one.elements.size() == 2);
  CHECK(one.elements.size() * one.stabilizer.size() == 4);
}

TEST_CASE("the action on m is a group action") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 23);
  int tested = 0;
  while (tested < 50) {
    const Rational m = rq(num(rng), den(rng));
    if (2 * m == 1) continue;
    for (auto g : KleinFour::all())
      for (auto h : KleinFour::all()) {
        const Rational hm = act(h, m);
        if (2 * hm == 1) continue;
        CHECK(act(g, hm) == act(g * h, m));
      }
    const auto o = orbit_m(m);
    CHECK(o.elements.size() * o.stabilizer.size() == 4);
    for (const auto& x : o.elements) CHECK(orbit_m(x).canonical == o.canonical);
    ++tested;
  }
}

TEST_CASE("kappa orbits") {
  const auto zero = orbit_kappa(Kappa::of(0));
  CHECK(zero.elements.size() == 2);
  bool has_inf = false;
  for (const auto& k : zero.elements) has_inf |= k.infinite;
  CHECK(has_inf);
  const auto one = orbit_kappa(Kappa::of(1));
  CHECK(one.elements.size() == 2);
  CHECK(one.canonical.close_to(Kappa::of(1)));
  CHECK(canonical_kappa(Kappa::of(2)).close_to(Kappa::of(0.5)));
  CHECK(canonical_kappa(Kappa::inf()).close_to(Kappa::of(0)));
  for (const auto& k : {Kappa::of(0), Kappa::of(1), Kappa::inf(), Kappa::of({0.4, 0.3}), Kappa::of({0, 1})}) {
    const auto o = orbit_kappa(k);
    CHECK(o.elements.size() * o.stabilizer.size() == 4);
  }
}

TEST_CASE("canonical kappa is invariant and lies in the half disk") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const Kappa k = Kappa::of({u(rng), u(rng)});
    const Kappa c = canonical_kappa(k);
    REQUIRE_FALSE(c.infinite);
    CHECK(std::abs(c.value) <= 1 + 1e-12);
    CHECK(c.value.real() >= -1e-12);
    for (auto g : KleinFour::all()) CHECK(canonical_kappa(act_kappa(g, k)).close_to(c, 1e-9));
  }
}

TEST_CASE("kappa parsing") {
  CHECK(parse_kappa("0.4+0.3i").close_to(Kappa::of({0.4, 0.3})));
  CHECK(parse_kappa("-2i").close_to(Kappa::of({0, -2})));
  CHECK(parse_kappa("inf").infinite);
  CHECK(parse_kappa("3").close_to(Kappa::of(3)));
  CHECK_THROWS_AS(parse_kappa("abc"), std::invalid_argument);
}

TEST_CASE("Dih4 multiplication") {
  const auto a = Dih4::a(), b = Dih4::b(), e = Dih4::e();
  CHECK(a * a == e);
  CHECK(b * b == e);
  CHECK((a * b).order() == 4);
  CHECK((a * b) * (a * b) == Dih4::zeta());
  for (const auto& g : Dih4::all()) {
    CHECK(g * Dih4::zeta() == Dih4::zeta() * g);
    CHECK(g * g.inverse() == e);
    for (const auto& h : Dih4::all()) {
      CHECK((g * h).project() == g.project() * h.project());
      for (const auto& k : Dih4::all()) CHECK((g * h) * k == g * (h * k));
    }
  }
  CHECK(Dih4::word("abab") == Dih4::zeta());
  CHECK(Dih4::word("") == e);
}

TEST_CASE("projection and subgroups") {
  CHECK((Dih4::a() * Dih4::b()).project() == KleinFour{true, true});
  CHECK(Dih4::zeta().project() == KleinFour::e());
  const auto r = subgroup_report();
  CHECK(r.z4_normal);
  CHECK(r.kernel_is_center);
  CHECK(r.homomorphism);
  CHECK(std::set<std::string>(r.g1_image.begin(), r.g1_image.end()) == std::set<std::string>{"e", "a"});
  CHECK(std::set<std::string>(r.g2_image.begin(), r.g2_image.end()) == std::set<std::string>{"e", "b"});
  CHECK(r.ok());
}

TEST_CASE("coefficients from roots") {
  CHECK(close(coeffs_from_roots({1, 3}), {10, 9}, 1e-15));
  CHECK(close(coeffs_from_roots({1, 3, 5}), {35, 259, 225}, 1e-15));
  CHECK(close(coeffs_from_roots({1, 0}), {1, 0}, 1e-15));
}

TEST_CASE("roots from coefficients") {
  const auto d = roots_from_coeffs({35, 259, 225});
  CHECK(d.n == 3);
  std::vector<double> re;
  for (const auto& a : d.roots) {
    CHECK(std::abs(a.imag()) < 1e-9);
    re.push_back(a.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1));
  CHECK(re[1] == doctest::Approx(3));
  CHECK(re[2] == doctest::Approx(5));
  CHECK_FALSE(d.multiple);
  CHECK(roots_from_coeffs({2, 1}).multiple);  // (s + 1)^2
}

TEST_CASE("root round trip") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    std::vector<Cplx> r;
    for (int j = 0; j < n; ++j) r.push_back({u(rng), u(rng)});
    CHECK(close(coeffs_from_roots(roots_from_coeffs(r).roots), r, 1e-9));
  }
}

TEST_CASE("Weyl orbits") {
  CHECK(weyl_orbit({1, 3}).size() == 4);
  CHECK(weyl_orbit({1, 3, 5}).size() == 24);
  CHECK(weyl_orbit({1, 1}).size() == 2);
  CHECK(signed_permutations({1, 3}).size() == 8);
  for (const auto& t : weyl_orbit({2, 5})) {
    CHECK(t[0] == Cplx(1));
  }
}

TEST_CASE("arithmetic stratum") {
  CHECK(arithmetic_stratum({1, 3}));
  CHECK_FALSE(arithmetic_stratum({1, 2}));
  CHECK(arithmetic_stratum({1, 3, 5}));
  CHECK_FALSE(arithmetic_stratum({1, 1}));
  CHECK(arithmetic_stratum({Cplx(0, 1), Cplx(0, 3)}));
  CHECK_THROWS_AS(arithmetic_stratum({Cplx(0, 1), 2, 3, 4, 5}), std::invalid_argument);
  for (const auto& roots : std::vector<std::vector<Cplx>>{{1, 3}, {1, 2}, {1, 3, 5}, {2, 7, 3}}) {
    const bool s = arithmetic_stratum(roots);
    for (const auto& t : signed_permutations(roots)) CHECK(arithmetic_stratum(t) == s);
  }
}

TEST_CASE("formatting") {
  CHECK(format_rational(rq(-4, 6)) == "-2/3");
  CHECK(format_rational(Rational(7)) == "7");
  CHECK(KleinFour{true, true}.str() == "ab");
  CHECK(Dih4::zeta().str() == "abab");
}
