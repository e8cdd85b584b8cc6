#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monge/equiv.hpp"
#include "monge/parse.hpp"

using namespace monge;
using equiv::builtin;
using sym::parse;
using sym::Rational;

namespace {

using Q = std::vector<Rational>;

const std::vector<Rational> kSampleM = {2, 3, -1, Rational(1, 4), 5, Rational(3, 4)};

bool equivalent(const std::string& name, const std::optional<Rational>& m) {
  sym::ZeroTestConfig cfg;
  const auto models = equiv::builtin_models(name, m);
  return equiv::check_equivalence(builtin(name, m), models.source, models.target, cfg).ok;
}

}  // namespace

TEST_CASE("Ta and Tb at a rational point") {
  CHECK(builtin("Ta", 2).apply_exact({1, 2, 3, 4, 5}) == Q{4, 2, 1, 1, Rational(1, 5)});
  // Tb is finite at m = 1 even though P_1 is excluded from the catalog
  CHECK(builtin("Tb", 1).apply_exact({1, 2, 3, 4, 5}) == Q{1, 4, 1, 2, 5});
  const auto v = builtin("Ta", 2).apply({1, 2, 3, 4, 5});
  CHECK(std::abs(v[4] - sym::Complex(0.2L)) < 1e-18L);
}

TEST_CASE("fibers") {
  const auto ta = builtin("Ta", 2);
  CHECK(ta.source_fiber == "P[2]");
  CHECK(ta.target_fiber == "P[-1]");
  CHECK(builtin("Tb", 3).target_fiber == "P[3/5]");
  CHECK(builtin("Tzeta", 3).target_fiber == "P[3]");
  CHECK(ta.lift == param::Dih4::a());
}

TEST_CASE("singular points and excluded parameters") {
  CHECK_THROWS_AS(builtin("Ta", 2).apply({1, 2, 3, 4, 0}), sym::DomainError);
  CHECK_THROWS_AS(builtin("Tb", Rational(1, 2)), equiv::MapError);
  CHECK_THROWS_AS(builtin("Tb", 0), equiv::MapError);
  CHECK_THROWS_AS(builtin("Psi", 1), equiv::MapError);
  CHECK_THROWS_AS(builtin("Tzeta", Rational(1, 2)), equiv::MapError);
  CHECK_THROWS_AS(builtin("Ta"), equiv::MapError);
  CHECK_THROWS_AS(builtin("Nope", 2), equiv::MapError);
}

TEST_CASE("P_m maps are equivalences for every sampled m") {
  for (const auto& m : kSampleM) {
    CAPTURE(m.get_str());
    CHECK(equivalent("Ta", m));
    CHECK(equivalent("Tb", m));
    CHECK(equivalent("Tzeta", m));
  }
  for (const Rational& m : {Rational(2), Rational(3), Rational(5), Rational(3, 4), Rational(-1)}) {
    CAPTURE(m.get_str());
    CHECK(equivalent("Psi", m));
  }
}

TEST_CASE("fixed maps are equivalences") {
  for (const char* name : {"PsiBar", "Phi", "Upsilon"}) {
    CAPTURE(name);
    CHECK(equivalent(name, std::nullopt));
  }
  CHECK(equivalent("Id", 3));
}

TEST_CASE("Psi with coefficient -1/2 on the z^2 term is not an equivalence") {
  for (const Rational& m : {Rational(2), Rational(3), Rational(5)}) {
    CHECK_FALSE(equivalent("PsiHalf", m));
    CHECK(equivalent("Psi", m));
  }
}

TEST_CASE("prolongation of base maps") {
  sym::ZeroTestConfig cfg;
  const auto f = parse("z2^2");
  const auto id = equiv::prolong(parse("x"), parse("z"), parse("y"), f, 2, cfg);
  CHECK(id.map.comps[3] == parse("z1"));
  CHECK(id.map.comps[4] == parse("z2"));
  CHECK(id.ybar1 == f);

  const auto ta = equiv::prolong(parse("z1"), parse("x*z1 - z"), parse("y"), f, 2, cfg);
  CHECK(sym::is_zero(ta.map.comps[3] - parse("x"), cfg).zero);
  CHECK(sym::is_zero(ta.map.comps[4] - parse("1/z2"), cfg).zero);

  CHECK_THROWS_AS(equiv::prolong(parse("x"), parse("z1"), parse("y"), f, 2, cfg), equiv::ProlongError);
}

TEST_CASE("prolongation restores the builtin jet components") {
  sym::ZeroTestConfig cfg;
  for (const auto& [name, m] : std::vector<std::pair<std::string, std::optional<Rational>>>{
           {"Ta", Rational(2)}, {"Tb", Rational(3)}, {"Tb", Rational(1, 4)}, {"Psi", Rational(3)},
           {"PsiBar", std::nullopt}, {"Phi", std::nullopt}, {"Upsilon", std::nullopt}}) {
    CAPTURE(name);
    const auto t = builtin(name, m);
    const auto models = equiv::builtin_models(name, m);
    const auto p = equiv::prolong(t.comps[0], t.comps[2], t.comps[1], models.source.f, 2, cfg);
    CHECK(jet::map_distance(p.map, t, cfg).residual < 1e-9);
  }
}

TEST_CASE("words in Ta and Tb") {
  sym::ZeroTestConfig cfg;
  const auto aa = equiv::word_map("aa", 3);
  CHECK(aa.source_fiber == "P[3]");
  CHECK(aa.target_fiber == "P[3]");
  CHECK(jet::map_distance(aa, jet::identity_map(aa.source, "P[3]"), cfg).residual < 1e-9);
  const auto abab = equiv::word_map("abab", 3);
  CHECK(jet::map_distance(abab, builtin("Tzeta", 3), cfg).residual < 1e-9);
  CHECK(jet::map_distance(builtin("Tzeta", 3), jet::identity_map(aa.source, "P[3]"), cfg).residual > 0.1);
  CHECK(abab.lift == param::Dih4::zeta());
}

TEST_CASE("dihedral identities") {
  sym::ZeroTestConfig cfg;
  for (const auto& m : kSampleM) {
    CAPTURE(m.get_str());
    const auto r = equiv::dihedral_suite(m, cfg);
    for (const auto& id : r.identities) {
      CAPTURE(id.name);
      CHECK(id.ok);
    }
    CHECK(r.ok());
    CHECK(r.identities.size() >= 8);
  }
}

TEST_CASE("Newton inversion of Upsilon") {
  const auto u = builtin("Upsilon");
  for (const auto& p : std::vector<std::vector<sym::Complex>>{
           {0.3L, -0.4L, 0.2L, 0.5L, 1.2L}, {-0.7L, 0.1L, 0.9L, -0.3L, 0.8L}}) {
    const auto q = u.apply(p);
    const auto w = equiv::upsilon_inverse(q);
    REQUIRE(w);
    const auto back = u.apply(*w);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(std::abs(back[i] - q[i]) < 1e-12L * (1 + std::abs(q[i])));
  }
}

TEST_CASE("Tcomp is Upsilon with PsiBar substituted") {
  sym::ZeroTestConfig cfg;
  const auto t = builtin("Tcomp");
  const auto u = builtin("Upsilon");
  const auto pb = builtin("PsiBar");
  sym::Bindings b;
  for (std::size_t i = 0; i < u.source.dim(); ++i) b[u.source.vars[i]] = pb.comps[i];
  std::vector<sym::Expr> diffs;
  for (std::size_t i = 0; i < t.comps.size(); ++i)
    diffs.push_back(sym::subst(u.comps[i], b) - t.comps[i]);
  CHECK(sym::all_zero(diffs, cfg).zero);
}

TEST_CASE("real branch of Tb is the principal formula after (x, y, z, z1, z2) -> (ix, iy, -z, iz1, z2)") {
  const char* principal[] = {"x*z2^(1-m)/s", "m/s*z1 - (m-1)/s*x*z2",
                             "z - x*z1 + x*y*z2^(1-m)/m + (m-1)^2/(m*(2*m-1))*x^2*z2",
                             "s/m*y - (m-1)/(m*s)*x*z2^m", "z2^(2*m-1)"};
  const sym::Complex I(0, 1);
  for (const Rational& m : {Rational(-1), Rational(1, 4), Rational(-3, 2)}) {
    CAPTURE(m.get_str());
    const auto real = builtin("Tb", m);
    const long double md = m.get_d();
    for (const auto& p : std::vector<std::vector<sym::Complex>>{
             {0.3L, -0.4L, 0.2L, 0.5L, 1.2L}, {-0.7L, 0.1L, 0.9L, -0.3L, 0.8L}}) {
      const auto want = real.apply(p);
      sym::EvalContext ctx;
      ctx.set("x", I * p[0]).set("y", I * p[1]).set("z", -p[2]).set("z1", I * p[3]).set("z2", p[4]);
      ctx.set("m", md).set("s", I * std::sqrt(1 - 2 * md));
      for (std::size_t i = 0; i < 5; ++i) {
        const auto got = sym::eval(parse(principal[i]), ctx);
        CHECK(std::abs(got - want[i]) < 1e-15L * (1 + std::abs(want[i])));
      }
    }
  }
}
