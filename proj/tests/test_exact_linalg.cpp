#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "monge/exact_linalg.hpp"

using namespace monge::linalg;

namespace {

QMatrix M(std::initializer_list<std::initializer_list<long>> rows) {
  QMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("rank and row basis") {
  CHECK(rank(M({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(QMatrix::identity(4)) == 4);
  CHECK(rank(QMatrix(3, 3)) == 0);
  const QMatrix b = row_basis(M({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}));
  CHECK(b.rows() == 2);
  CHECK(b == M({{1, 0, 1}, {0, 1, 1}}));
}

TEST_CASE("unique solutions") {
  const auto x = solve_unique(M({{2, 1}, {1, 3}}), {Rational(3), Rational(5)});
  REQUIRE(x);
  CHECK((*x)[0] == Rational(4, 5));
  CHECK((*x)[1] == Rational(7, 5));
  // overdetermined but consistent
  CHECK(solve_unique(M({{1, 0}, {0, 1}, {1, 1}}), {Rational(1), Rational(2), Rational(3)}));
  CHECK_FALSE(solve_unique(M({{1, 0}, {0, 1}, {1, 1}}), {Rational(1), Rational(2), Rational(4)}));
  CHECK_THROWS_AS(solve_unique(M({{1, 1}, {2, 2}}), {Rational(1), Rational(2)}), std::runtime_error);
}

TEST_CASE("characteristic polynomial") {
  const auto c = charpoly(M({{2, 1}, {0, 3}}));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 6);
  CHECK(c[1] == -5);
  CHECK(c[2] == 1);
}

TEST_CASE("rational roots") {
  // (t - 1/2)^2 (t + 3)
  const auto r = rational_roots({Rational(3, 4), Rational(-11, 4), Rational(2), Rational(1)});
  CHECK(r.complete);
  REQUIRE(r.roots.size() == 2);
  int total = 0;
  for (const auto& [v, mult] : r.roots) {
    total += mult;
    if (v == Rational(1, 2)) CHECK(mult == 2);
    else CHECK(v == -3);
  }
  CHECK(total == 3);
  CHECK_FALSE(rational_roots({Rational(-2), Rational(0), Rational(1)}).complete);
}

TEST_CASE("Jordan structure") {
  CHECK(jordan_partition(M({{2, 1, 0}, {0, 2, 0}, {0, 0, 2}})) == std::vector<int>{1, 2});
  CHECK(jordan_partition(M({{1, 1}, {0, 2}})) == std::vector<int>{1, 1});
  CHECK(jordan_partition(M({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}})) == std::vector<int>{3});
  const auto blocks = jordan_structure(M({{3, 0, 0}, {0, 1, 1}, {0, 0, 1}}));
  REQUIRE(blocks.size() == 2);
  for (const auto& b : blocks) {
    if (b.eigenvalue == 1) CHECK(b.sizes == std::vector<int>{2});
    else {
      CHECK(b.eigenvalue == 3);
      CHECK(b.sizes == std::vector<int>{1});
    }
  }
  CHECK_THROWS_AS(jordan_structure(M({{0, -1}, {1, 0}})), std::runtime_error);
}

TEST_CASE("Jordan partition is a similarity invariant") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  const QMatrix a = M({{2, 1, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, -1}});
  int tried = 0;
  while (tried < 20) {
    QMatrix p(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) p(i, j) = d(rng);
    if (rank(p) < 4) continue;
    QMatrix inv(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      std::vector<Rational> e(4);
      e[j] = 1;
      const auto col = solve_unique(p, e);
      REQUIRE(col);
      for (std::size_t i = 0; i < 4; ++i) inv(i, j) = (*col)[i];
    }
    CHECK(p * inv == QMatrix::identity(4));
    CHECK(jordan_partition(p * a * inv) == std::vector<int>{1, 1, 2});
    ++tried;
  }
}
