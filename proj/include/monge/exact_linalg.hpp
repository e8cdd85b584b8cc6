#pragma once

// Dense linear algebra over the rationals.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace monge::linalg {

using Rational = mpq_class;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  QMatrix operator*(const QMatrix& b) const;
  QMatrix operator-(const QMatrix& b) const;
  QMatrix scaled(const Rational& c) const;
  bool operator==(const QMatrix& b) const;
  bool is_zero() const;
  std::string str() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

std::size_t rank(QMatrix m);

// Solves A x = b.  Empty if inconsistent; throws std::runtime_error when the
// solution is not unique.
std::optional<std::vector<Rational>> solve_unique(QMatrix a, std::vector<Rational> b);

// Basis of the row space, as rows (reduced echelon form).
QMatrix row_basis(QMatrix m);

// Coefficients of det(tI - A) = t^n + c[n-1] t^(n-1) + ... + c[0], returned
// as c[0..n] with c[n] = 1.
std::vector<Rational> charpoly(const QMatrix& a);

// Rational roots with multiplicity; `complete` tells whether they account
// for the full degree.
struct RationalRoots {
  std::vector<std::pair<Rational, int>> roots;
  bool complete = false;
};
RationalRoots rational_roots(std::vector<Rational> coeffs);

struct JordanBlock {
  Rational eigenvalue;
  std::vector<int> sizes;  // ascending
};

// Throws std::runtime_error("irrational eigenvalues") when the spectrum is
// not rational.
std::vector<JordanBlock> jordan_structure(const QMatrix& a);

// All block sizes, ascending.
std::vector<int> jordan_partition(const QMatrix& a);

}  // namespace monge::linalg
