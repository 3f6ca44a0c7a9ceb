#include "splitdyn/poly.hpp"

#include <functional>
#include <numeric>
#include <sstream>

#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"
#include "splitdyn/zpoly.hpp"

namespace splitdyn {

namespace {

// Integer coefficients and the common denominator of a polynomial over Q.
ZPoly clear_denominators(const std::vector<FieldElement>& v, mpz_class& den) {
  den = 1;
  for (const auto& c : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.rational().get_den().get_mpz_t());
  std::vector<mpz_class> z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const mpq_class& q = v[i].rational();
    z[i] = q.get_num() * (den / q.get_den());
  }
  return ZPoly(std::move(z));
}

std::vector<FieldElement> over_denominator(const FieldPtr& field, const ZPoly& z, const mpz_class& den) {
  std::vector<FieldElement> out;
  out.reserve(z.c.size());
  for (const auto& v : z.c) {
    mpq_class q(v, den);
    q.canonicalize();
    out.emplace_back(field, std::move(q));
  }
  return out;
}

// Multiplication over Q with denominators cleared once: one integer product,
// then a single canonicalisation per output coefficient.
std::vector<FieldElement> mul_rational(const FieldPtr& field, const std::vector<FieldElement>& a,
                                       const std::vector<FieldElement>& b) {
  mpz_class da, db;
  const ZPoly za = clear_denominators(a, da), zb = clear_denominators(b, db);
  return over_denominator(field, za * zb, da * db);
}

void check_budget(const Poly& p, const Budget& budget, const char* where) {
  if (p.bit_size() > budget.coefficient_bits)
    throw ResourceLimit(std::string(where) + ": coefficient size " + std::to_string(p.bit_size()) +
                        " bits exceeds budget of " + std::to_string(budget.coefficient_bits));
}

// p(q) over Q in Z[x]: with q = Q/c and p = P/e,
// e c^n p(q) = sum P_i c^(n-i) Q^i, evaluated by splitting the coefficient
// range in halves against precomputed Q^(2^k).
Poly compose_rational(const Poly& p, const Poly& q, const Budget& budget) {
  mpz_class e, c;
  const ZPoly P = clear_denominators(p.coeffs(), e), Qz = clear_denominators(q.coeffs(), c);
  const int n = P.degree();
  std::vector<mpz_class> scaled(static_cast<std::size_t>(n) + 1);
  mpz_class cp = 1;
  for (int i = n; i >= 0; --i, cp *= c) scaled[static_cast<std::size_t>(i)] = P.coeff(i) * cp;
  const mpz_class den = e * (cp / c);

  const std::size_t limit = budget.coefficient_bits + 64 * static_cast<std::size_t>(n + 1);
  auto check = [&](const ZPoly& z) {
    for (const auto& v : z.c)
      if (mpz_sizeinbase(v.get_mpz_t(), 2) > limit) throw ResourceLimit("compose: intermediate coefficients exceed the budget");
  };
  int levels = 0;
  while ((1 << levels) < n + 1) ++levels;
  std::vector<ZPoly> pw{Qz};
  for (int k = 1; k < levels; ++k) {
    pw.push_back(pw.back() * pw.back());
    check(pw.back());
  }
  std::function<ZPoly(int, int)> rec = [&](int lo, int k) -> ZPoly {
    if (lo > n) return {};
    if (k <= 3) {
      ZPoly acc;
      for (int i = std::min(n, lo + (1 << k) - 1); i >= lo; --i) {
        acc = acc * Qz;
        if (acc.c.empty()) acc.c.push_back(0);
        acc.c[0] += scaled[static_cast<std::size_t>(i)];
        acc.trim();
      }
      return acc;
    }
    ZPoly low = rec(lo, k - 1);
    ZPoly high = rec(lo + (1 << (k - 1)), k - 1);
    if (high.is_zero()) return low;
    ZPoly r = high * pw[static_cast<std::size_t>(k - 1)] + low;
    check(r);
    return r;
  };
  return Poly(p.field(), over_denominator(p.field(), rec(0, levels), den));
}

}  // namespace

Poly::Poly(FieldPtr field, std::vector<FieldElement> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
  for (const auto& c : c_) require_same_field(field_, c.field(), "Poly");
  trim();
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::x(const FieldPtr& field) {
  return Poly(field, {FieldElement::zero(field), FieldElement::one(field)});
}

Poly Poly::constant(const FieldElement& c) { return Poly(c.field(), {c}); }

Poly Poly::monomial(const FieldElement& c, int k) {
  std::vector<FieldElement> v(static_cast<std::size_t>(k) + 1, FieldElement::zero(c.field()));
  v.back() = c;
  return Poly(c.field(), std::move(v));
}

Poly Poly::from_rationals(const FieldPtr& field, const std::vector<mpq_class>& coeffs) {
  std::vector<FieldElement> v;
  v.reserve(coeffs.size());
  for (const auto& q : coeffs) v.emplace_back(field, q);
  return Poly(field, std::move(v));
}

FieldElement Poly::coeff(int i) const {
  if (i < 0 || i > degree()) return FieldElement::zero(field_);
  return c_[static_cast<std::size_t>(i)];
}

FieldElement Poly::leading() const { return is_zero() ? FieldElement::zero(field_) : c_.back(); }

FieldElement Poly::operator()(const FieldElement& at) const {
  require_same_field(field_, at.field(), "Poly evaluation");
  FieldElement acc = FieldElement::zero(field_);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * at + c_[i];
  return acc;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  require_same_field(a.field_, b.field_, "Poly +");
  const Poly& longer = a.c_.size() >= b.c_.size() ? a : b;
  const Poly& shorter = a.c_.size() >= b.c_.size() ? b : a;
  Poly r = longer;
  for (std::size_t i = 0; i < shorter.c_.size(); ++i) r.c_[i] += shorter.c_[i];
  r.trim();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a.field_, b.field_, "Poly *");
  if (a.is_zero() || b.is_zero()) return Poly(a.field_);
  if (a.field_->is_rational()) return Poly(a.field_, mul_rational(a.field_, a.c_, b.c_));
  std::vector<FieldElement> r(a.c_.size() + b.c_.size() - 1, FieldElement::zero(a.field_));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(a.field_, std::move(r));
}

Poly operator*(const FieldElement& s, const Poly& p) {
  require_same_field(s.field(), p.field_, "scalar * Poly");
  Poly r = p;
  for (auto& c : r.c_) c *= s;
  r.trim();
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  return a.field_->id() == b.field_->id() && a.c_ == b.c_;
}

std::size_t Poly::bit_size() const {
  std::size_t bits = 0;
  for (const auto& c : c_) bits += c.bit_size();
  return bits;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const FieldElement& c = c_[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
    if (c.is_rational()) {
      mpq_class q = c.rational();
      const bool negative = q < 0;
      if (!first) os << (negative ? " - " : " + ");
      else if (negative) os << "-";
      q = abs(q);
      if (mono.empty()) os << q.get_str();
      else if (q == 1) os << mono;
      else os << q.get_str() << "*" << mono;
    } else {
      if (!first) os << " + ";
      os << c.to_string() << (mono.empty() ? "" : "*" + mono);
    }
    first = false;
  }
  return os.str();
}

Poly derivative(const Poly& p) {
  if (p.degree() < 1) return Poly(p.field());
  std::vector<FieldElement> d;
  for (int i = 1; i <= p.degree(); ++i) d.push_back(FieldElement(p.field(), mpq_class(i)) * p.coeff(i));
  return Poly(p.field(), std::move(d));
}

Poly pow(const Poly& p, int k) {
  if (k < 0) throw PreconditionViolated("negative polynomial power");
  Poly result = Poly::constant(FieldElement::one(p.field()));
  Poly base = p;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  require_same_field(a.field(), b.field(), "divmod");
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  const FieldPtr& F = a.field();
  std::vector<FieldElement> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly(F), a};
  std::vector<FieldElement> quo(static_cast<std::size_t>(a.degree() - db + 1), FieldElement::zero(F));
  const FieldElement inv_lead = b.leading().inverse();
  for (int k = a.degree(); k >= db; --k) {
    const FieldElement c = rem[static_cast<std::size_t>(k)] * inv_lead;
    if (c.is_zero()) continue;
    quo[static_cast<std::size_t>(k - db)] = c;
    for (int i = 0; i <= db; ++i) rem[static_cast<std::size_t>(k - db + i)] -= c * b.coeff(i);
  }
  return {Poly(F, std::move(quo)), Poly(F, std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  while (!r1.is_zero()) {
    Poly r = divmod(r0, r1).second;
    r0 = std::move(r1);
    r1 = std::move(r);
  }
  if (r0.is_zero()) return r0;
  return r0.leading().inverse() * r0;
}

Poly compose(const Poly& p, const Poly& q, const Budget& budget) {
  require_same_field(p.field(), q.field(), "compose");
  if (p.is_zero()) return p;
  if (p.field()->is_rational() && p.degree() >= 1) {
    Poly r = compose_rational(p, q, budget);
    check_budget(r, budget, "compose");
    return r;
  }
  Poly acc = Poly::constant(p.leading());
  for (int i = p.degree() - 1; i >= 0; --i) {
    acc = acc * q;
    const FieldElement c = p.coeff(i);
    if (!c.is_zero()) acc = acc + Poly::constant(c);
  }
  check_budget(acc, budget, "compose");
  return acc;
}

Poly iterate(const Poly& p, int n, const Budget& budget) {
  if (n < 0) throw PreconditionViolated("iterate: negative count");
  Poly acc = Poly::x(p.field());
  for (int i = 0; i < n; ++i) {
    acc = compose(p, acc, budget);
    check_budget(acc, budget, "iterate");
  }
  return acc;
}

LinearPoly::LinearPoly(FieldElement a, FieldElement b) : a_(std::move(a)), b_(std::move(b)) {
  require_same_field(a_.field(), b_.field(), "LinearPoly");
  if (a_.is_zero()) throw PreconditionViolated("linear polynomial needs a nonzero slope");
}

LinearPoly LinearPoly::identity(const FieldPtr& field) {
  return {FieldElement::one(field), FieldElement::zero(field)};
}

LinearPoly LinearPoly::inverse() const {
  FieldElement inv = a_.inverse();
  return {inv, -(b_ * inv)};
}

Poly LinearPoly::as_poly() const { return Poly(field(), {b_, a_}); }

Poly LinearPoly::apply(const Poly& p) const { return a_ * p + Poly::constant(b_); }

LinearPoly LinearPoly::after(const LinearPoly& other) const {
  return {a_ * other.a_, a_ * other.b_ + b_};
}

Poly conjugate(const Poly& p, const LinearPoly& L) {
  require_same_field(p.field(), L.field(), "conjugate");
  return L.inverse().apply(compose(p, L.as_poly()));
}

Poly chebyshev(int d, const FieldPtr& field) {
  if (d < 1) throw PreconditionViolated("chebyshev: degree must be >= 1");
  const Poly x = Poly::x(field);
  Poly prev = Poly::constant(FieldElement(field, 2));  // T_0 = 2 under this normalisation
  Poly cur = x;
  for (int k = 1; k < d; ++k) {
    Poly next = x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::pair<Poly, LinearPoly> normal_form(const Poly& p) {
  const int d = p.degree();
  if (d < 2) throw PreconditionViolated("normal_form: degree must be >= 2");
  const FieldPtr& F = p.field();
  const FieldElement lead = p.leading();
  auto alpha = nth_root(lead.inverse(), d - 1);
  if (!alpha)
    throw RootNotInField("normal_form: no " + std::to_string(d - 1) + "-th root of 1/" + lead.to_string() +
                         " in " + F->describe());
  const FieldElement beta = -(p.coeff(d - 1) / (FieldElement(F, d) * lead));
  LinearPoly L(*alpha, beta);
  return {conjugate(p, L), L};
}

namespace {

bool is_normal(const Poly& p) { return p.degree() >= 2 && p.is_monic() && p.coeff(p.degree() - 1).is_zero(); }

// zeta^{-1} p(zeta x)
Poly scale_conjugate(const Poly& p, const FieldElement& zeta) {
  std::vector<FieldElement> c;
  FieldElement zk = zeta.inverse();
  for (int i = 0; i <= p.degree(); ++i) {
    c.push_back(p.coeff(i) * zk);
    zk *= zeta;
  }
  return Poly(p.field(), std::move(c));
}

// Some alpha with alpha^{-1} p(alpha x) == target, for p and target both
// centred (vanishing x^{d-1} coefficient).
std::optional<FieldElement> scaling_witness(const Poly& p, const Poly& target) {
  const int d = p.degree();
  if (target.degree() != d) return std::nullopt;
  auto base = nth_root(target.leading() / p.leading(), d - 1);
  if (!base) return std::nullopt;
  for (const auto& z : roots_of_unity(p.field(), d - 1)) {
    FieldElement alpha = *base * z;
    if (scale_conjugate(p, alpha) == target) return alpha;
  }
  return std::nullopt;
}

}  // namespace

std::optional<FieldElement> normal_conjugacy_witness(const Poly& p, const Poly& q) {
  require_same_field(p.field(), q.field(), "normal_conjugacy_witness");
  if (!is_normal(p)) throw NotNormalForm(p.to_string() + " is not monic and centred");
  if (!is_normal(q)) throw NotNormalForm(q.to_string() + " is not monic and centred");
  if (p.degree() != q.degree()) return std::nullopt;
  for (const auto& zeta : roots_of_unity(p.field(), p.degree() - 1))
    if (scale_conjugate(p, zeta) == q) return zeta;
  return std::nullopt;
}

std::string to_string(Exceptional e) {
  switch (e) {
    case Exceptional::Monomial: return "Monomial";
    case Exceptional::PlusChebyshev: return "PlusChebyshev";
    case Exceptional::MinusChebyshev: return "MinusChebyshev";
    case Exceptional::No: return "No";
  }
  return "No";
}

Exceptional is_exceptional_poly(const Poly& p) {
  const int d = p.degree();
  if (d < 2) throw PreconditionViolated("is_exceptional_poly: degree must be >= 2");
  const FieldPtr& F = p.field();
  // Centre p; the remaining freedom is a pure scaling x -> alpha x.
  const FieldElement beta = -(p.coeff(d - 1) / (FieldElement(F, d) * p.leading()));
  const Poly centred = conjugate(p, LinearPoly(FieldElement::one(F), beta));
  const Poly tcheb = chebyshev(d, F);
  if (scaling_witness(centred, Poly::monomial(FieldElement::one(F), d))) return Exceptional::Monomial;
  if (scaling_witness(centred, tcheb)) return Exceptional::PlusChebyshev;
  if (scaling_witness(centred, -tcheb)) return Exceptional::MinusChebyshev;
  return Exceptional::No;
}

std::optional<Poly> solve_outer_factor(const Poly& C, const Poly& A, const FieldElement& lead) {
  const int n = A.degree();
  if (n < 1 || C.degree() < 0 || C.degree() % n != 0) return std::nullopt;
  const FieldPtr& F = C.field();
  const int k = C.degree() / n;
  if (lead.is_zero()) return std::nullopt;
  std::vector<FieldElement> pc(static_cast<std::size_t>(k) + 1, FieldElement::zero(F));
  pc[static_cast<std::size_t>(k)] = lead;
  // The x^{nk-j} coefficient of A∘P is linear in p_{k-j} with this slope.
  const FieldElement slope = FieldElement(F, n) * A.leading() * lead.pow(n - 1);
  for (int j = 1; j <= k; ++j) {
    const Poly residual = C - compose(A, Poly(F, pc));
    if (residual.degree() > n * k - j) return std::nullopt;
    pc[static_cast<std::size_t>(k - j)] = residual.coeff(n * k - j) / slope;
  }
  Poly P(F, std::move(pc));
  if (compose(A, P) != C) return std::nullopt;
  return P;
}

std::optional<Poly> solve_inner_factor(const Poly& D, const Poly& B) {
  if (B.degree() < 1) return std::nullopt;
  std::vector<FieldElement> digits;
  Poly rest = D;
  while (!rest.is_zero()) {
    auto [q, r] = divmod(rest, B);
    if (r.degree() > 0) return std::nullopt;
    digits.push_back(r.coeff(0));
    rest = std::move(q);
  }
  return Poly(D.field(), std::move(digits));
}

namespace {

void check_engstrom_inputs(const Poly& A, const Poly& B, const Poly& C, const Poly& D, const char* where) {
  require_same_field(A.field(), B.field(), where);
  require_same_field(A.field(), C.field(), where);
  require_same_field(A.field(), D.field(), where);
  for (const Poly* p : {&A, &B, &C, &D})
    if (p->degree() < 1) throw PreconditionViolated(std::string(where) + ": inputs must be nonconstant");
  if (compose(A, B) != compose(C, D)) throw PreconditionViolated(std::string(where) + ": A∘B != C∘D");
}

}  // namespace

Poly engstrom_left(const Poly& A, const Poly& B, const Poly& C, const Poly& D) {
  check_engstrom_inputs(A, B, C, D, "engstrom_left");
  if (C.degree() % A.degree() != 0) throw PreconditionViolated("engstrom_left: deg A does not divide deg C");
  const int k = C.degree() / A.degree();
  // From B = P∘D the leading coefficient of P is lead(B)/lead(D)^k; no radicals.
  const FieldElement lead = B.leading() / D.leading().pow(k);
  auto P = solve_outer_factor(C, A, lead);
  if (!P) throw NoSolution("engstrom_left: triangular solve of C = A∘P failed");
  if (compose(*P, D) != B) throw NoSolution("engstrom_left: C = A∘P holds but B != P∘D");
  return *P;
}

Poly engstrom_right(const Poly& A, const Poly& B, const Poly& C, const Poly& D) {
  check_engstrom_inputs(A, B, C, D, "engstrom_right");
  if (D.degree() % B.degree() != 0) throw PreconditionViolated("engstrom_right: deg B does not divide deg D");
  auto Q = solve_inner_factor(D, B);
  if (!Q) throw NoSolution("engstrom_right: D is not a polynomial in B");
  if (compose(C, *Q) != A) throw NoSolution("engstrom_right: D = Q∘B holds but A != C∘Q");
  return *Q;
}

}  // namespace splitdyn
