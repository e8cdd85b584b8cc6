#include "monge/exact_linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace monge::linalg {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::operator*(const QMatrix& b) const {
  if (cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  QMatrix c(rows_, b.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& aik = (*this)(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

QMatrix QMatrix::operator-(const QMatrix& b) const {
  QMatrix c = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

QMatrix QMatrix::scaled(const Rational& s) const {
  QMatrix c = *this;
  for (auto& v : c.a_) v *= s;
  return c;
}

bool QMatrix::operator==(const QMatrix& b) const {
  return rows_ == b.rows_ && cols_ == b.cols_ && a_ == b.a_;
}

bool QMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& v) { return sgn(v) == 0; });
}

std::string QMatrix::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
    os << "]\n";
  }
  return os.str();
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && sgn(m(p, col)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    }
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(QMatrix m) { return rref(m).size(); }

QMatrix row_basis(QMatrix m) {
  auto piv = rref(m);
  QMatrix out(piv.size(), m.cols());
  for (std::size_t i = 0; i < piv.size(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

std::optional<std::vector<Rational>> solve_unique(QMatrix a, std::vector<Rational> b) {
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  if (piv.size() != a.cols()) throw std::runtime_error("solution not unique");
  std::vector<Rational> x(a.cols());
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, a.cols());
  return x;
}

std::vector<Rational> charpoly(const QMatrix& a) {
  // Faddeev-LeVerrier.
  const std::size_t n = a.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = next;
    QMatrix am = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

namespace {

std::vector<mpz_class> divisors(mpz_class v) {
  v = abs(v);
  std::vector<mpz_class> out;
  if (v == 0) return out;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  }
  return out;
}

Rational horner(const std::vector<Rational>& c, const Rational& t) {
  Rational v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

// Divides by (t - r); c is low-to-high.
std::vector<Rational> deflate(const std::vector<Rational>& c, const Rational& r) {
  const std::size_t n = c.size() - 1;
  std::vector<Rational> q(n);
  Rational carry = 0;
  for (std::size_t i = n + 1; i-- > 1;) {
    carry = carry * r + c[i];
    q[i - 1] = carry;
  }
  return q;
}

}  // namespace

RationalRoots rational_roots(std::vector<Rational> c) {
  RationalRoots out;
  while (c.size() > 1 && sgn(c.back()) == 0) c.pop_back();
  int zero_mult = 0;
  while (c.size() > 1 && sgn(c.front()) == 0) {
    c.erase(c.begin());
    ++zero_mult;
  }
  if (zero_mult) out.roots.push_back({Rational(0), zero_mult});
  bool progress = true;
  while (c.size() > 1 && progress) {
    progress = false;
    mpz_class lcm = 1;
    for (const auto& v : c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
    std::vector<mpz_class> ints;
    for (const auto& v : c) ints.push_back(mpz_class(v * lcm));
    for (const auto& p : divisors(ints.front())) {
      for (const auto& q : divisors(ints.back())) {
        for (int s : {1, -1}) {
          Rational r(s * p, q);
          r.canonicalize();
          if (sgn(horner(c, r)) != 0) continue;
          int mult = 0;
          while (c.size() > 1 && sgn(horner(c, r)) == 0) {
            c = deflate(c, r);
            ++mult;
          }
          out.roots.push_back({r, mult});
          progress = true;
          break;
        }
        if (progress) break;
      }
      if (progress) break;
    }
  }
  out.complete = c.size() == 1;
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<JordanBlock> jordan_structure(const QMatrix& a) {
  const std::size_t n = a.rows();
  auto roots = rational_roots(charpoly(a));
  if (!roots.complete) throw std::runtime_error("irrational eigenvalues");
  std::vector<JordanBlock> out;
  for (const auto& [lambda, mult] : roots.roots) {
    QMatrix shifted = a - QMatrix::identity(n).scaled(lambda);
    std::vector<std::size_t> ranks{n};
    QMatrix power = QMatrix::identity(n);
    for (int k = 1; k <= mult + 1; ++k) {
      power = power * shifted;
      ranks.push_back(rank(power));
      if (ranks[k] == ranks[k - 1]) break;
    }
    // blocks of size >= k: ranks[k-1] - ranks[k]
    JordanBlock jb;
    jb.eigenvalue = lambda;
    for (std::size_t k = 1; k < ranks.size(); ++k) {
      std::size_t at_least_k = ranks[k - 1] - ranks[k];
      std::size_t at_least_k1 = k + 1 < ranks.size() ? ranks[k] - ranks[k + 1] : 0;
      for (std::size_t c = 0; c < at_least_k - at_least_k1; ++c) jb.sizes.push_back(static_cast<int>(k));
    }
    std::sort(jb.sizes.begin(), jb.sizes.end());
    out.push_back(std::move(jb));
  }
  return out;
}

std::vector<int> jordan_partition(const QMatrix& a) {
  std::vector<int> sizes;
  for (const auto& jb : jordan_structure(a)) sizes.insert(sizes.end(), jb.sizes.begin(), jb.sizes.end());
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace monge::linalg
