#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitdyn/field.hpp"

namespace splitdyn {

/// Limit on the total number of coefficient bits a composition chain may
/// produce before it is reported as a ResourceLimit error.
struct Budget {
  std::size_t coefficient_bits = std::size_t{1} << 20;
};

/// Dense univariate polynomial over a Field, lowest degree first. The zero
/// polynomial has no coefficients and degree -1.
class Poly {
 public:
  /// Zero polynomial over Q.
  Poly() : Poly(Field::rationals()) {}
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  Poly(FieldPtr field, std::vector<FieldElement> coeffs);

  static Poly x(const FieldPtr& field);
  static Poly constant(const FieldElement& c);
  static Poly monomial(const FieldElement& c, int k);
  /// Convenience constructor for rational coefficients, lowest degree first.
  static Poly from_rationals(const FieldPtr& field, const std::vector<mpq_class>& coeffs);

  const FieldPtr& field() const noexcept { return field_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  const std::vector<FieldElement>& coeffs() const noexcept { return c_; }
  /// Coefficient of x^i (zero outside the stored range).
  FieldElement coeff(int i) const;
  /// Leading coefficient; zero for the zero polynomial.
  FieldElement leading() const;
  bool is_monic() const { return !is_zero() && leading().is_one(); }

  FieldElement operator()(const FieldElement& at) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const FieldElement& s, const Poly& p);
  friend bool operator==(const Poly& a, const Poly& b);

  std::size_t bit_size() const;
  /// Parseable text, e.g. "x^2 - 1", "1/2*x^3 + (t + 1)*x".
  std::string to_string() const;

 private:
  void trim();

  FieldPtr field_;
  std::vector<FieldElement> c_;
};

Poly derivative(const Poly& p);
Poly pow(const Poly& p, int k);
/// Division with remainder; b nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);

/// p∘q.
Poly compose(const Poly& p, const Poly& q, const Budget& budget = {});
/// p∘p∘...∘p (n times); iterate(p, 0) = x.
Poly iterate(const Poly& p, int n, const Budget& budget = {});

/// The affine map x -> a*x + b with a != 0.
class LinearPoly {
 public:
  LinearPoly(FieldElement a, FieldElement b);
  static LinearPoly identity(const FieldPtr& field);

  const FieldElement& a() const noexcept { return a_; }
  const FieldElement& b() const noexcept { return b_; }
  const FieldPtr& field() const noexcept { return a_.field(); }

  LinearPoly inverse() const;
  Poly as_poly() const;
  FieldElement operator()(const FieldElement& x) const { return a_ * x + b_; }
  /// L(p) = a*p + b.
  Poly apply(const Poly& p) const;
  /// (*this)∘other.
  LinearPoly after(const LinearPoly& other) const;

  friend bool operator==(const LinearPoly& l, const LinearPoly& r) { return l.a_ == r.a_ && l.b_ == r.b_; }
  std::string to_string() const { return as_poly().to_string(); }

 private:
  FieldElement a_;
  FieldElement b_;
};

/// L^{-1}∘p∘L.
Poly conjugate(const Poly& p, const LinearPoly& L);

/// T_d with T_d(z + 1/z) = z^d + z^{-d}.
Poly chebyshev(int d, const FieldPtr& field);

/// Monic, centred representative q = L^{-1}∘p∘L. Throws RootNotInField when the
/// (d-1)-st root of 1/lead(p) is not found in the field.
std::pair<Poly, LinearPoly> normal_form(const Poly& p);

/// zeta with zeta^{d-1} = 1 and q(x) = zeta^{-1} p(zeta x), when one exists in
/// the field. Both inputs must already be in normal form.
std::optional<FieldElement> normal_conjugacy_witness(const Poly& p, const Poly& q);

enum class Exceptional { Monomial, PlusChebyshev, MinusChebyshev, No };
std::string to_string(Exceptional e);

/// Whether p is linearly conjugate over its field to x^d, T_d or -T_d.
Exceptional is_exceptional_poly(const Poly& p);

/// Given A∘B = C∘D with deg A | deg C, the P with C = A∘P and B = P∘D.
Poly engstrom_left(const Poly& A, const Poly& B, const Poly& C, const Poly& D);
/// Given A∘B = C∘D with deg B | deg D, the Q with D = Q∘B and A = C∘Q.
Poly engstrom_right(const Poly& A, const Poly& B, const Poly& C, const Poly& D);

/// Solves C = A∘P for P of degree deg C / deg A with the given leading
/// coefficient, coefficient by coefficient from the top. Absent when the
/// triangular solve does not reproduce C exactly.
std::optional<Poly> solve_outer_factor(const Poly& C, const Poly& A, const FieldElement& lead);

/// Writes D = sum q_i B^i (B-adic expansion) and returns Q = sum q_i x^i when
/// every digit is a constant; absent otherwise.
std::optional<Poly> solve_inner_factor(const Poly& D, const Poly& B);

}  // namespace splitdyn
