#pragma once

// Integer polynomials in one and two variables: the elimination substrate for
// heights (binary forms, resultants) and curves (images, radicals).

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

namespace splitdyn {

/// Dense univariate polynomial over Z, lowest degree first, trimmed.
struct ZPoly {
  std::vector<mpz_class> c;

  ZPoly() = default;
  explicit ZPoly(std::vector<mpz_class> coeffs) : c(std::move(coeffs)) { trim(); }
  static ZPoly constant(const mpz_class& v) { return ZPoly({v}); }

  int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const noexcept { return c.empty(); }
  const mpz_class& lead() const { return c.back(); }
  mpz_class coeff(int i) const { return (i < 0 || i > degree()) ? mpz_class(0) : c[static_cast<std::size_t>(i)]; }
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.c == b.c; }
};

ZPoly operator+(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a);
ZPoly operator*(const ZPoly& a, const ZPoly& b);
ZPoly operator*(const mpz_class& s, const ZPoly& a);
ZPoly derivative(const ZPoly& a);
mpz_class eval(const ZPoly& a, const mpz_class& x);
mpz_class content(const ZPoly& a);
ZPoly primitive_part(const ZPoly& a);
/// Exact quotient a/b over Z; throws PreconditionViolated when inexact.
ZPoly exact_div(const ZPoly& a, const ZPoly& b);
/// Whether b divides a over Z (with the quotient when it does).
bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient = nullptr);
/// Pseudo-remainder prem(a, b) = lc(b)^{deg a - deg b + 1} a mod b.
ZPoly pseudo_rem(const ZPoly& a, const ZPoly& b);
/// gcd over Z[x], normalised with positive leading coefficient.
ZPoly gcd(const ZPoly& a, const ZPoly& b);

/// Determinant of a square integer matrix (Bareiss, fraction free).
mpz_class determinant(std::vector<std::vector<mpz_class>> m);

/// Sylvester resultant of a and b read with formal degrees (da, db); leading
/// coefficients may vanish.
mpz_class resultant(const ZPoly& a, int da, const ZPoly& b, int db);

/// Same for coefficients in Z[v]: the result is a polynomial in v.
ZPoly resultant(const std::vector<ZPoly>& a, int da, const std::vector<ZPoly>& b, int db);

/// Rational roots of a nonzero integer polynomial, as reduced (num, den) with den > 0.
std::vector<mpq_class> rational_roots(const ZPoly& a);

/// Dense bivariate polynomial over Z: c[j] is the coefficient of y^j, itself
/// a polynomial in x.
struct BPoly {
  std::vector<ZPoly> c;

  BPoly() = default;
  explicit BPoly(std::vector<ZPoly> coeffs) : c(std::move(coeffs)) { trim(); }
  /// Builds from c[i][j] = coefficient of x^i y^j.
  static BPoly from_grid(const std::vector<std::vector<mpz_class>>& grid);

  bool is_zero() const noexcept { return c.empty(); }
  int deg_y() const noexcept { return static_cast<int>(c.size()) - 1; }
  int deg_x() const;
  int total_degree() const;
  mpz_class coeff(int i, int j) const;
  void trim() {
    for (auto& p : c) p.trim();
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  friend bool operator==(const BPoly& a, const BPoly& b) { return a.c == b.c; }
};

BPoly operator+(const BPoly& a, const BPoly& b);
BPoly operator-(const BPoly& a, const BPoly& b);
BPoly operator*(const BPoly& a, const BPoly& b);
BPoly operator*(const mpz_class& s, const BPoly& a);
BPoly swap_variables(const BPoly& a);
BPoly derivative_x(const BPoly& a);
BPoly derivative_y(const BPoly& a);
mpz_class eval(const BPoly& a, const mpz_class& x, const mpz_class& y);
/// Specialises x, leaving a polynomial in y.
ZPoly eval_x(const BPoly& a, const mpz_class& x);
/// Specialises y, leaving a polynomial in x.
ZPoly eval_y(const BPoly& a, const mpz_class& y);
/// gcd of all integer coefficients.
mpz_class integer_content(const BPoly& a);
/// gcd in Z[x] of the coefficients of y^j.
ZPoly content_y(const BPoly& a);
/// Removes every factor that depends on x alone or on y alone, and the
/// integer content.
BPoly strip_univariate_factors(const BPoly& a);
/// Exact quotient in Z[x,y]; throws PreconditionViolated when inexact.
BPoly exact_div(const BPoly& a, const BPoly& b);
BPoly exact_div(const BPoly& a, const ZPoly& b_in_x);
/// gcd in Z[x,y] up to sign.
BPoly gcd(const BPoly& a, const BPoly& b);
/// Product of the distinct irreducible factors involving y (a / gcd(a, da/dy)).
BPoly squarefree_in_y(const BPoly& a);

/// Interpolates a polynomial over Z with deg_x <= dx and deg_y <= dy from
/// values at the integer grid points returned by interpolation_nodes().
std::vector<mpz_class> interpolation_nodes(int count);
BPoly interpolate_grid(const std::vector<std::vector<mpz_class>>& values, int dx, int dy);

}  // namespace splitdyn
