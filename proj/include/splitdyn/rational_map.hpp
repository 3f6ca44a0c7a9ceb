#pragma once

// Rational self-maps of P^1 over Q, stored through an integral homogeneous
// lift, and rational points of P^1.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "splitdyn/poly.hpp"
#include "splitdyn/zpoly.hpp"

namespace splitdyn {

/// A point [a:b] of P^1(Q), standing for a/b. Normalised: gcd(|a|,|b|) = 1,
/// b >= 0, and a = 1 when b = 0.
class ProjPointQ {
 public:
  ProjPointQ() : a_(0), b_(1) {}
  ProjPointQ(mpz_class a, mpz_class b);
  explicit ProjPointQ(const mpq_class& x) : ProjPointQ(x.get_num(), x.get_den()) {}
  static ProjPointQ infinity() { return {1, 0}; }

  const mpz_class& a() const noexcept { return a_; }
  const mpz_class& b() const noexcept { return b_; }
  bool is_infinity() const noexcept { return b_ == 0; }
  /// The affine coordinate; throws PreconditionViolated at infinity.
  mpq_class affine() const;
  /// max(|a|, |b|).
  mpz_class norm() const;
  /// "inf", "3", "-1/2".
  std::string to_string() const;

  friend bool operator==(const ProjPointQ& l, const ProjPointQ& r) { return l.a_ == r.a_ && l.b_ == r.b_; }
  friend bool operator<(const ProjPointQ& l, const ProjPointQ& r);

 private:
  mpz_class a_;
  mpz_class b_;
};

/// Parses "inf", "oo", "p/q" or an integer.
ProjPointQ parse_point(const std::string& text);

struct ProjPointHash {
  std::size_t operator()(const ProjPointQ& p) const;
};

/// A rational map f = F0(x,1)/F1(x,1) of degree d >= 1 over Q. The lift
/// (F0, F1) consists of binary forms of degree d with integer coefficients
/// and joint content 1; coefficient i of a form multiplies X^i Y^(d-i).
class RationalMap {
 public:
  /// num/den with coprime numerator and denominator over Q.
  RationalMap(const Poly& numerator, const Poly& denominator);
  explicit RationalMap(const Poly& p);
  /// Directly from forms of formal degree d (content is removed).
  RationalMap(ZPoly F0, ZPoly F1, int d);

  int degree() const noexcept { return d_; }
  const ZPoly& F0() const noexcept { return F0_; }
  const ZPoly& F1() const noexcept { return F1_; }
  /// Res(F0, F1) as forms of degree d; nonzero.
  const mpz_class& resultant() const noexcept { return res_; }

  bool is_polynomial() const;
  Poly numerator() const;
  Poly denominator() const;
  /// The map as a polynomial; throws PreconditionViolated if it is not one.
  Poly as_poly() const;

  ProjPointQ operator()(const ProjPointQ& x) const;
  /// Exact image of the lift (a, b) before normalisation.
  std::pair<mpz_class, mpz_class> lift(const mpz_class& a, const mpz_class& b) const;

  /// "x^2 - 1" or "(x^2 + 1)/(2*x)".
  std::string to_string() const;

  friend bool operator==(const RationalMap& l, const RationalMap& r) {
    return l.d_ == r.d_ && l.F0_ == r.F0_ && l.F1_ == r.F1_;
  }

 private:
  void normalise();

  ZPoly F0_;
  ZPoly F1_;
  int d_ = 0;
  mpz_class res_;
};

/// f∘g.
RationalMap compose(const RationalMap& f, const RationalMap& g);
/// f^n; iterate(f, 0) is the identity.
RationalMap iterate(const RationalMap& f, int n);

/// Evaluates a binary form of formal degree d at (a, b).
mpz_class eval_form(const ZPoly& F, int d, const mpz_class& a, const mpz_class& b);

}  // namespace splitdyn
