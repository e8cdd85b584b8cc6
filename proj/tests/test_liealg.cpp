#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "monge/catalog.hpp"
#include "monge/lie.hpp"
#include "monge/paramspace.hpp"
#include "monge/parse.hpp"

using namespace monge;
using jet::VectorField;
using lie::LieAlgebraData;
using sym::parse;
using sym::Rational;

namespace {

const jet::Chart C5 = jet::Chart::monge(2);

VectorField F(std::vector<const char*> comps, std::string name) {
  std::vector<sym::Expr> es;
  for (const char* c : comps) es.push_back(parse(c));
  return VectorField::from(C5, es, std::move(name));
}

Rational coeff(const LieAlgebraData& alg, const char* u, const char* v, const char* w) {
  const auto b = alg.bracket(alg.unit(alg.index_of(u)), alg.unit(alg.index_of(v)));
  return b[alg.index_of(w)];
}

}  // namespace

TEST_CASE("Heisenberg algebra from vector fields") {
  const auto alg = lie::structure_constants({F({"1", "0", "0", "0", "0"}, "X"),
                                             F({"0", "0", "x", "1", "0"}, "Y"),
                                             F({"0", "0", "1", "0", "0"}, "Z")});
  CHECK(alg.exact);
  CHECK(coeff(alg, "X", "Y", "Z") == 1);
  CHECK(coeff(alg, "Y", "X", "Z") == -1);
  CHECK(coeff(alg, "X", "Z", "Z") == 0);
  CHECK(lie::derived_series(alg) == std::vector<int>{3, 1, 0});
  CHECK(lie::is_solvable(alg));
  CHECK(alg.table() == std::vector<std::string>{"[X,Y] = Z"});
}

TEST_CASE("sl2 is not solvable") {
  const auto alg = lie::structure_constants({F({"1", "0", "0", "0", "0"}, "E"),
                                             F({"2*x", "0", "0", "0", "0"}, "H"),
                                             F({"-x^2", "0", "0", "0", "0"}, "G")});
  CHECK(coeff(alg, "H", "E", "E") == -2);
  CHECK(lie::derived_series(alg) == std::vector<int>{3, 3});
  CHECK_FALSE(lie::is_solvable(alg));
}

TEST_CASE("abelian algebra") {
  const auto alg = lie::structure_constants(
      {VectorField::coordinate(C5, "x"), VectorField::coordinate(C5, "y")});
  CHECK(lie::derived_series(alg) == std::vector<int>{2, 0});
  CHECK(alg.table().empty());
}

TEST_CASE("structure errors") {
  const auto dx = VectorField::coordinate(C5, "x");
  CHECK_THROWS_WITH_AS(lie::structure_constants({dx, parse("2") * dx}), "fields dependent",
                       lie::StructureError);
  CHECK_THROWS_WITH_AS(lie::structure_constants({dx, F({"0", "x", "0", "0", "0"}, "xdy")}),
                       "coefficients not constant", lie::StructureError);
}

TEST_CASE("P_3 structure constants") {
  const auto alg = lie::structure_constants(catalog::model_Pm(3).symmetries);
  REQUIRE(alg.exact);
  CHECK(coeff(alg, "W1", "W5", "W3") == 1);
  CHECK(coeff(alg, "W2", "W7", "W3") == Rational(-1, 3));
  CHECK(coeff(alg, "W1", "W4", "W1") == 1);
  CHECK(coeff(alg, "W4", "W3", "W3") == -2);
  CHECK(lie::derived_series(alg) == std::vector<int>{7, 5, 1, 0});
}

TEST_CASE("ln structure constants") {
  const auto alg = lie::structure_constants(catalog::model_ln().symmetries);
  CHECK(coeff(alg, "V1", "V5", "V3") == 1);
  CHECK(coeff(alg, "V2", "V7", "V3") == -1);
  CHECK(coeff(alg, "V1", "V6", "V1") == -1);
  CHECK(coeff(alg, "V1", "V6", "V2") == -1);
  CHECK(coeff(alg, "V5", "V6", "V5") == 1);
  for (const char* w : {"V1", "V2", "V3", "V4", "V5", "V6", "V7"}) CHECK(coeff(alg, "V4", "V6", w) == 0);
}

TEST_CASE("structure tensors are antisymmetric and satisfy Jacobi") {
  for (const auto& model : catalog::submaximal_models()) {
    CAPTURE(model.name);
    const auto alg = lie::structure_constants(model.symmetries);
    CHECK(alg.residual < 1e-9);
    const std::size_t n = alg.dim();
    if (!alg.exact) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(alg.c_float[i][j][k] + alg.c_float[j][i][k]) < 1e-9);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) CHECK(alg.c[i][j][k] == -alg.c[j][i][k]);
        for (std::size_t k = 0; k < n; ++k) {
          const auto a = alg.unit(i), b = alg.unit(j), c = alg.unit(k);
          auto s = alg.bracket(a, alg.bracket(b, c));
          const auto t = alg.bracket(b, alg.bracket(c, a));
          const auto u = alg.bracket(c, alg.bracket(a, b));
          for (std::size_t l = 0; l < n; ++l) CHECK(s[l] + t[l] + u[l] == 0);
        }
      }
    CHECK(lie::derived_series(alg) == std::vector<int>{7, 5, 1, 0});
  }
}

TEST_CASE("adjoint action of W6'") {
  for (const Rational m : {Rational(3), Rational(2), Rational(5), Rational(-1)}) {
    const auto alg = lie::structure_constants(catalog::model_Pm(m).symmetries);
    auto e = alg.unit(alg.index_of("W6"));
    e[alg.index_of("W4")] = Rational(-1, 2);
    const auto a = lie::ad_restricted(
        alg, e, {alg.index_of("W1"), alg.index_of("W2"), alg.index_of("W5"), alg.index_of("W7")});
    CHECK(linalg::jordan_partition(a) == std::vector<int>{1, 1, 1, 1});
    std::multiset<Rational> eig;
    for (const auto& b : linalg::jordan_structure(a))
      for (int size : b.sizes)
        for (int i = 0; i < size; ++i) eig.insert(b.eigenvalue);
    CHECK(eig == std::multiset<Rational>{Rational(1, 2), Rational(1, 2) - m, Rational(-1, 2),
                                         m - Rational(1, 2)});
  }
  const auto half = lie::structure_constants(catalog::model_Pm(Rational(1, 2)).symmetries);
  auto e = half.unit(half.index_of("W6"));
  e[half.index_of("W4")] = Rational(-1, 2);
  const std::vector<int> sub{half.index_of("W1"), half.index_of("W2"), half.index_of("W5"),
                             half.index_of("W7")};
  CHECK(linalg::jordan_partition(lie::ad_restricted(half, e, sub)) == std::vector<int>{1, 1, 2});
  CHECK_THROWS_AS(lie::ad_restricted(half, half.unit(half.index_of("W1")), sub), lie::StructureError);
}

TEST_CASE("ln adjoint of V6 has two blocks of size 2") {
  const auto alg = lie::structure_constants(catalog::model_ln().symmetries);
  const auto a = lie::ad_restricted(
      alg, alg.unit(alg.index_of("V6")),
      {alg.index_of("V1"), alg.index_of("V2"), alg.index_of("V5"), alg.index_of("V7")});
  CHECK(linalg::jordan_partition(a) == std::vector<int>{2, 2});
}

TEST_CASE("grading by W4") {
  const auto alg = lie::structure_constants(catalog::model_Pm(2).symmetries);
  std::map<int, int> labels;
  for (const char* n : {"W1", "W2", "W5", "W7"}) labels[alg.index_of(n)] = -1;
  labels[alg.index_of("W3")] = -2;
  labels[alg.index_of("W4")] = 0;
  labels[alg.index_of("W6")] = 0;
  const auto rep = lie::grading_check(alg, alg.index_of("W4"), labels);
  CHECK(rep.ok);
  CHECK(rep.heisenberg_form_rank == 4);
  labels[alg.index_of("W5")] = -2;
  CHECK_FALSE(lie::grading_check(alg, alg.index_of("W4"), labels).ok);
}

TEST_CASE("frame decomposition") {
  sym::ZeroTestConfig cfg;
  const auto p3 = catalog::model_Pm(3);
  const std::vector<VectorField> frame{p3.field("W1"), p3.field("W2"), p3.field("W3"), p3.field("W5"),
                                       p3.field("W6'")};
  const auto c = lie::frame_decompose(p3.field("W4"), frame, cfg);
  const char* want[] = {"x", "y", "2*z - x*z1", "z1", "0"};
  for (std::size_t i = 0; i < 5; ++i) CHECK(sym::is_zero(c[i] - parse(want[i]), cfg).zero);
  const auto w1 = lie::frame_decompose(p3.field("W1"), frame, cfg);
  CHECK(w1[0] == sym::Expr(1));
  for (std::size_t i = 1; i < 5; ++i) CHECK(w1[i].is_zero());
  CHECK_THROWS_AS(lie::frame_decompose(p3.field("W1"), {p3.field("W1"), p3.field("W1")}, cfg),
                  lie::StructureError);

  const auto ns = catalog::model_NS();
  const std::vector<VectorField> nframe{ns.field("U6"), ns.field("U3"), ns.field("U2"), ns.field("U5"),
                                        ns.field("U1")};
  for (const char* name : {"U4", "U7"}) {
    const auto d = lie::frame_decompose(ns.field(name), nframe, cfg);
    VectorField back = VectorField::zero(ns.chart);
    for (std::size_t i = 0; i < 5; ++i) back = back + d[i] * nframe[i];
    CHECK(sym::all_zero((back - ns.field(name)).comps, cfg).zero);
  }
}

TEST_CASE("J on P_m") {
  CHECK(lie::invariant_J(2) == Rational(9, 25));
  CHECK(lie::invariant_J(Rational(1, 2)) == 0);
  CHECK(lie::invariant_J(3) == Rational(25, 169));
}

TEST_CASE("J is invariant under the parameter action") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 17);
  int checked = 0;
  while (checked < 100) {
    Rational m(num(rng), den(rng));
    m.canonicalize();
    if (m == 0 || m == 1 || 2 * m == 1) continue;
    const Rational j = lie::invariant_J(m);
    for (auto g : param::KleinFour::all()) CHECK(lie::invariant_J(param::act(g, Rational(m))) == j);
    ++checked;
  }
}

TEST_CASE("I^2 from k") {
  const auto g2 = lie::invariant_I2_k(3);
  CHECK(g2.infinite);
  CHECK(g2.g2);
  CHECK(lie::invariant_I2_k(Rational(1, 3)).g2);
  const auto v = lie::invariant_I2_k(2);
  CHECK_FALSE(v.infinite);
  CHECK(v.value == Rational(9, 7));
  CHECK(lie::invariant_I2_k(0).value == -1);
}

TEST_CASE("I^2 from r1, r2") {
  CHECK(lie::invariant_I2_q(3, 1).value == Rational(81, 19));
  CHECK(lie::invariant_I2_q(0, 1).pole);
  // a:b = 3 is the G2 ratio
  CHECK(lie::invariant_I2_q(10, 9).g2);
  for (const Rational m : {Rational(3), Rational(5), Rational(-1), Rational(1, 4), Rational(3, 4)}) {
    const Rational a(1, 2), b = m - a;
    const auto q = lie::invariant_I2_q(a * a + b * b, a * a * b * b);
    const auto k = lie::invariant_I2_k(2 * m - 1);
    CHECK(q.infinite == k.infinite);
    CHECK(q.value == k.value);
  }
}

TEST_CASE("consistency relation") {
  for (const Rational m : {Rational(3), Rational(5), Rational(-1), Rational(1, 4), Rational(3, 4), Rational(2)}) {
    const auto r = lie::invariant_record(m);
    CHECK(r.consistency_defined);
    CHECK(r.consistency == 0);
  }
  const auto r2 = lie::invariant_record(2);
  CHECK(r2.g2);
  CHECK(r2.I2.str() == "inf (G2)");
}
