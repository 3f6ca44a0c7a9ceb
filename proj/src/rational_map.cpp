#include "splitdyn/rational_map.hpp"

#include <functional>

#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"

namespace splitdyn {

ProjPointQ::ProjPointQ(mpz_class a, mpz_class b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_ == 0 && b_ == 0) throw PreconditionViolated("[0:0] is not a point of P^1");
  mpz_class g = gcd(a_, b_);
  a_ /= g;
  b_ /= g;
  if (b_ < 0 || (b_ == 0 && a_ < 0)) {
    a_ = -a_;
    b_ = -b_;
  }
}

mpq_class ProjPointQ::affine() const {
  if (is_infinity()) throw PreconditionViolated("the point at infinity has no affine coordinate");
  return mpq_class(a_, b_);
}

mpz_class ProjPointQ::norm() const { return std::max<mpz_class>(abs(a_), b_); }

std::string ProjPointQ::to_string() const {
  if (is_infinity()) return "inf";
  if (b_ == 1) return a_.get_str();
  return a_.get_str() + "/" + b_.get_str();
}

bool operator<(const ProjPointQ& l, const ProjPointQ& r) {
  if (l.is_infinity() != r.is_infinity()) return r.is_infinity();
  if (l.is_infinity()) return false;
  return l.affine() < r.affine();
}

ProjPointQ parse_point(const std::string& text) {
  if (text == "inf" || text == "oo" || text == "infinity") return ProjPointQ::infinity();
  return ProjPointQ(parse_rational(text));
}

std::size_t ProjPointHash::operator()(const ProjPointQ& p) const {
  std::size_t h = std::hash<std::string>()(p.a().get_str(16));
  return h ^ (std::hash<std::string>()(p.b().get_str(16)) * 1000003u);
}

namespace {

ZPoly integral_coeffs(const Poly& p, const mpz_class& scale) {
  std::vector<mpz_class> z;
  for (const auto& c : p.coeffs()) {
    mpq_class v = c.rational() * scale;
    z.push_back(v.get_num());
  }
  return ZPoly(std::move(z));
}

void require_rational(const Poly& p) {
  if (!p.field()->is_rational()) throw FieldMismatch("rational maps are defined over Q only");
}

}  // namespace

RationalMap::RationalMap(const Poly& numerator, const Poly& denominator) {
  require_rational(numerator);
  require_rational(denominator);
  if (denominator.is_zero()) throw DivisionByZero("rational map with zero denominator");
  if (numerator.is_zero()) throw PreconditionViolated("constant rational map");
  if (gcd(numerator, denominator).degree() > 0) throw PreconditionViolated("numerator and denominator share a factor");
  mpz_class scale = 1;
  for (const Poly* p : {&numerator, &denominator})
    for (const auto& c : p->coeffs()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.rational().get_den().get_mpz_t());
  F0_ = integral_coeffs(numerator, scale);
  F1_ = integral_coeffs(denominator, scale);
  d_ = std::max(numerator.degree(), denominator.degree());
  normalise();
}

RationalMap::RationalMap(const Poly& p) : RationalMap(p, Poly::constant(FieldElement::one(p.field()))) {}

RationalMap::RationalMap(ZPoly F0, ZPoly F1, int d) : F0_(std::move(F0)), F1_(std::move(F1)), d_(d) {
  if (F0_.degree() > d || F1_.degree() > d) throw PreconditionViolated("form exceeds its formal degree");
  normalise();
}

void RationalMap::normalise() {
  if (d_ < 1) throw PreconditionViolated("rational map of degree < 1");
  mpz_class g = gcd(content(F0_), content(F1_));
  if (g == 0) throw PreconditionViolated("zero lift");
  // Sign: the top coefficient of F1 (as a form in Y first) is positive.
  const ZPoly& ref = F1_.is_zero() ? F0_ : F1_;
  if (ref.lead() < 0) g = -g;
  for (auto& v : F0_.c) v /= g;
  for (auto& v : F1_.c) v /= g;
  res_ = splitdyn::resultant(F0_, d_, F1_, d_);
  if (res_ == 0) throw PreconditionViolated("degenerate lift: Res(F0, F1) = 0");
}

bool RationalMap::is_polynomial() const { return F1_.degree() == 0; }

namespace {

Poly to_poly(const ZPoly& z) {
  std::vector<mpq_class> q(z.c.begin(), z.c.end());
  return Poly::from_rationals(Field::rationals(), q);
}

}  // namespace

Poly RationalMap::numerator() const { return to_poly(F0_); }
Poly RationalMap::denominator() const { return to_poly(F1_); }

Poly RationalMap::as_poly() const {
  if (!is_polynomial()) throw PreconditionViolated("rational map is not a polynomial");
  const FieldPtr Q = Field::rationals();
  return FieldElement(Q, mpq_class(1, F1_.c[0])) * numerator();
}

mpz_class eval_form(const ZPoly& F, int d, const mpz_class& a, const mpz_class& b) {
  mpz_class acc = 0, bp = 1;
  // Horner in a with the b powers folded in from the bottom.
  std::vector<mpz_class> bpow(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    bpow[static_cast<std::size_t>(i)] = bp;
    bp *= b;
  }
  for (int i = d; i >= 0; --i) acc = acc * a + F.coeff(i) * bpow[static_cast<std::size_t>(d - i)];
  return acc;
}

std::pair<mpz_class, mpz_class> RationalMap::lift(const mpz_class& a, const mpz_class& b) const {
  return {eval_form(F0_, d_, a, b), eval_form(F1_, d_, a, b)};
}

ProjPointQ RationalMap::operator()(const ProjPointQ& x) const {
  auto [u, v] = lift(x.a(), x.b());
  return ProjPointQ(u, v);
}

std::string RationalMap::to_string() const {
  if (is_polynomial()) return as_poly().to_string();
  auto wrap = [](const Poly& p) {
    const std::string s = p.to_string();
    return p.coeffs().size() > 1 || s.find(' ') != std::string::npos ? "(" + s + ")" : s;
  };
  return wrap(numerator()) + "/" + wrap(denominator());
}

RationalMap compose(const RationalMap& f, const RationalMap& g) {
  const int d = f.degree(), e = g.degree();
  // G0, G1 dehomogenised at Y = 1; the product keeps formal degree d*e.
  std::vector<ZPoly> p0{ZPoly::constant(1)}, p1{ZPoly::constant(1)};
  for (int k = 0; k < d; ++k) {
    p0.push_back(p0.back() * g.F0());
    p1.push_back(p1.back() * g.F1());
  }
  auto apply = [&](const ZPoly& F) {
    ZPoly acc;
    for (int k = 0; k <= d; ++k) {
      if (F.coeff(k) == 0) continue;
      acc = acc + F.coeff(k) * (p0[static_cast<std::size_t>(k)] * p1[static_cast<std::size_t>(d - k)]);
    }
    return acc;
  };
  return RationalMap(apply(f.F0()), apply(f.F1()), d * e);
}

RationalMap iterate(const RationalMap& f, int n) {
  if (n < 0) throw PreconditionViolated("negative iterate");
  RationalMap acc(ZPoly({0, 1}), ZPoly({1}), 1);
  for (int i = 0; i < n; ++i) acc = compose(f, acc);
  return acc;
}

}  // namespace splitdyn
