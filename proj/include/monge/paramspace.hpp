#pragma once

// Parameter-space group actions: Z2 x Z2 on m and k, the +-kappa^{+-1}
// action on the projective line, the dihedral lift Dih4 with its projection,
// and the type C_n Weyl group acting on root tuples.

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace monge::param {

using Rational = mpq_class;
using Cplx = std::complex<double>;

class ExcludedPoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element of G = Z2 x Z2 as two bits: e, a, b, ab.
struct KleinFour {
  bool a = false, b = false;
  static KleinFour e() { return {}; }
  static KleinFour gen_a() { return {true, false}; }
  static KleinFour gen_b() { return {false, true}; }
  static std::array<KleinFour, 4> all() { return {e(), gen_a(), gen_b(), {true, true}}; }
  KleinFour operator*(KleinFour o) const { return {a != o.a, b != o.b}; }
  bool operator==(const KleinFour& o) const { return a == o.a && b == o.b; }
  std::string str() const;
};

// Dih4 element s^e r^i stored as 4e + i.  a = s, b = s r, ab = r,
// zeta = r^2.
class Dih4 {
 public:
  constexpr Dih4() = default;
  static Dih4 from_index(int i);
  static Dih4 e() { return Dih4(); }
  static Dih4 a() { return from_index(4); }
  static Dih4 b() { return from_index(5); }
  static Dih4 zeta() { return from_index(2); }
  static std::array<Dih4, 8> all();
  // Product of letters 'a' and 'b', left to right.
  static Dih4 word(std::string_view w);

  int index() const { return 4 * e_ + i_; }
  Dih4 operator*(const Dih4& o) const;
  Dih4 inverse() const;
  bool operator==(const Dih4& o) const { return index() == o.index(); }
  int order() const;
  KleinFour project() const;  // p(a) = a, p(b) = b
  std::string str() const;    // shortest word, "e" or "zeta"-free

 private:
  constexpr Dih4(int e, int i) : e_(e), i_(i) {}
  int e_ = 0;  // 0 or 1
  int i_ = 0;  // 0..3
};

struct SubgroupReport {
  bool z4_normal = false;           // <ab> has order 4 and is normal
  bool kernel_is_center = false;    // Ker p = {e, zeta}
  bool homomorphism = false;        // p(gh) = p(g)p(h)
  std::vector<std::string> g1_image;  // p(<a, zeta>)
  std::vector<std::string> g2_image;  // p(<b, zeta>)
  bool ok() const;
};
SubgroupReport subgroup_report();

// a.m = 1 - m, b.m = m/(2m-1), ab.m = (m-1)/(2m-1).  Throws ExcludedPoint at
// m = 1/2 for words containing b.
Rational act(KleinFour g, const Rational& m);
// a.k = -k, b.k = 1/k.
Rational act_k(KleinFour g, const Rational& k);

struct RationalOrbit {
  std::vector<Rational> elements;      // distinct, in the order e, a, b, ab
  std::vector<KleinFour> stabilizer;
  Rational canonical;                  // representative in the interval domain
};
RationalOrbit orbit_m(const Rational& m);
RationalOrbit orbit_k(const Rational& k);

// Point of CP^1 in the chart [1 : kappa]; infinity is [0 : 1].
struct Kappa {
  bool infinite = false;
  Cplx value;
  static Kappa inf() { return {true, {}}; }
  static Kappa of(Cplx v) { return {false, v}; }
  bool close_to(const Kappa& o, double tol = 1e-12) const;
  std::string str() const;
};
Kappa act_kappa(KleinFour g, const Kappa& k);  // a: -k, b: 1/k

struct KappaOrbit {
  std::vector<Kappa> elements;
  std::vector<KleinFour> stabilizer;
  Kappa canonical;
};
KappaOrbit orbit_kappa(const Kappa& k);
// In the half disk |kappa| <= 1, Re >= 0; lexicographically smallest
// (Re, Im) among orbit elements there.
Kappa canonical_kappa(const Kappa& k);
Kappa parse_kappa(std::string_view text);

// prod (s + a_i^2) = s^n + r_1 s^{n-1} + ... + r_n with s = t^2.
std::vector<Cplx> coeffs_from_roots(const std::vector<Cplx>& a);

struct RootData {
  int n = 0;
  std::vector<Cplx> roots;   // a_i = principal sqrt(-s_i)
  std::vector<Cplx> coeffs;  // r_1..r_n
  bool multiple = false;     // repeated s_i
};
RootData roots_from_coeffs(const std::vector<Cplx>& r);

// Signed permutations modulo the global sign, normalized so that the first
// nonzero coordinate is 1.
std::vector<std::vector<Cplx>> weyl_orbit(const std::vector<Cplx>& a, double tol = 1e-9);
// Every signed permutation (no projective normalization).
std::vector<std::vector<Cplx>> signed_permutations(const std::vector<Cplx>& a);

// Whether the 2n values {+-a_i} form an arithmetic progression.  Real input:
// sort and require a constant step; complex input: search orderings
// (n <= 4).
bool arithmetic_stratum(const std::vector<Cplx>& a, double tol = 1e-9);

std::string format_rational(const Rational& q);

}  // namespace monge::param
