#include "splitdyn/classify.hpp"

#include <numeric>

#include "splitdyn/errors.hpp"

namespace splitdyn {

UnicriticalMap::UnicriticalMap(int degree, FieldElement constant) : d(degree), c(std::move(constant)) {
  if (d < 2) throw PreconditionViolated("unicritical map needs d >= 2");
}

Poly UnicriticalMap::poly() const {
  return Poly::monomial(FieldElement::one(c.field()), d) + Poly::constant(c);
}

bool UnicriticalMap::is_exceptional() const {
  return c.is_zero() || (d == 2 && c == FieldElement(c.field(), -2));
}

namespace {

void require_divisor(const UnicriticalMap& u, int delta) {
  if (delta < 1 || u.d % delta != 0) throw PreconditionViolated("delta must be a positive divisor of d");
}

Poly shifted_power(const UnicriticalMap& u, int delta) {
  return Poly::monomial(FieldElement::one(u.c.field()), delta) + Poly::constant(u.c);
}

long ipow(long base, int e) {
  long r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// P with P^k = S and leading coefficient lead, from the power-series k-th
// root of the reversed polynomial; absent when no such P exists.
std::optional<Poly> polynomial_root(const Poly& S, int k, const FieldElement& lead) {
  const int N = S.degree();
  if (N < 0 || N % k != 0) return std::nullopt;
  const FieldPtr& F = S.field();
  const int q = N / k;
  const FieldElement alpha1 = FieldElement(F, mpq_class(1, k)) + FieldElement::one(F);
  const FieldElement s0 = S.coeff(N);
  std::vector<FieldElement> p{lead};
  for (int n = 1; n <= q; ++n) {
    FieldElement acc = FieldElement::zero(F);
    for (int j = 1; j <= n; ++j) {
      const FieldElement sj = S.coeff(N - j);
      if (sj.is_zero()) continue;
      acc += (alpha1 * FieldElement(F, j) - FieldElement(F, n)) * sj * p[static_cast<std::size_t>(n - j)];
    }
    p.push_back(acc / (FieldElement(F, n) * s0));
  }
  std::vector<FieldElement> coeffs(p.rbegin(), p.rend());
  Poly P(F, std::move(coeffs));
  if (pow(P, k) != S) return std::nullopt;
  return P;
}

// f^n∘A, composing f from the outside.
Poly outer_iterate(const Poly& f, int n, const Poly& A, const Budget& budget) {
  Poly acc = A;
  for (int i = 0; i < n; ++i) acc = compose(f, acc, budget);
  return acc;
}

}  // namespace

Poly f_delta(const UnicriticalMap& u, int delta) {
  require_divisor(u, delta);
  return pow(shifted_power(u, delta), u.d / delta);
}

std::pair<Poly, Poly> generate_semiconjugacy(const UnicriticalMap& u, int n, int m, int delta, const LinearPoly& L,
                                             const Budget& budget) {
  require_divisor(u, delta);
  require_same_field(u.c.field(), L.field(), "generate_semiconjugacy");
  if (n < 1 || m < 0) throw PreconditionViolated("generate_semiconjugacy needs n >= 1 and m >= 0");
  const Poly A = outer_iterate(u.poly(), m, compose(shifted_power(u, delta), L.as_poly(), budget), budget);
  const Poly B = conjugate(iterate(f_delta(u, delta), n, budget), L);
  return {A, B};
}

bool intertwine_check(const UnicriticalMap& u, int n, const SemiconjugacySolution& sol, const Budget& budget) {
  const auto [A, B] = generate_semiconjugacy(u, n, sol.m, sol.delta, sol.L, budget);
  return outer_iterate(u.poly(), n, A, budget) == compose(A, B, budget);
}

SemiconjugacySolution canonical_solution(const UnicriticalMap& u, const SemiconjugacySolution& sol) {
  if (sol.m >= 1 && sol.delta == 1) return {sol.m - 1, u.d, LinearPoly(sol.L.a(), sol.L.b() + u.c)};
  return sol;
}

SemiconjugacySolution classify_semiconjugacy(const UnicriticalMap& u, int n, const Poly& A, const Poly& B,
                                             const Budget& budget) {
  const FieldPtr& F = u.c.field();
  require_same_field(F, A.field(), "classify_semiconjugacy");
  require_same_field(F, B.field(), "classify_semiconjugacy");
  if (u.is_exceptional()) throw PreconditionViolated("classify_semiconjugacy needs a non-exceptional map");
  if (n < 1) throw PreconditionViolated("classify_semiconjugacy needs n >= 1");
  if (A.degree() < 1 || B.degree() < 1) throw PreconditionViolated("A and B must be nonconstant");
  const Poly f = u.poly();
  if (outer_iterate(f, n, A, budget) != compose(A, B, budget)) throw NotASolution("f^n∘A != A∘B");

  const int d = u.d;
  const long N = A.degree();
  int m = 0;
  long delta = N;
  if (N > 1) {
    while (delta % d == 0 && delta != d) {
      delta /= d;
      ++m;
    }
    if (d % delta != 0) throw UnexpectedShape("deg A = " + std::to_string(N) + " is not d^m * delta with delta | d");
  } else {
    delta = 1;
  }

  const FieldElement beta = B.leading();
  Poly core = A;
  for (int step = 0; step < m; ++step) {
    const FieldElement lead = core.leading().pow(ipow(d, n - 1)) / beta.pow(core.degree() / d);
    auto peeled = polynomial_root(core - Poly::constant(u.c), d, lead);
    if (!peeled) throw UnexpectedShape("A does not factor as f∘A'");
    core = std::move(*peeled);
  }

  // core = (x^delta + c)∘(ax + b): lead(core) = a^delta and lead(B) = a^(d^n - 1).
  const long e = ipow(d, n) - 1;
  long s0 = 1, s1 = 0, r0 = delta, r1 = e, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const long q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
  }
  if (r0 != 1) throw UnexpectedShape("delta and d^n - 1 are not coprime");
  const FieldElement a = core.leading().pow(s0) * beta.pow(t0);
  FieldElement b = FieldElement::zero(F);
  if (delta == 1) {
    b = core.coeff(0) - u.c;
  } else {
    b = core.coeff(static_cast<int>(delta) - 1) / (FieldElement(F, delta) * a.pow(delta - 1));
  }
  SemiconjugacySolution sol{m, static_cast<int>(delta), LinearPoly(a, b)};
  const auto [A2, B2] = generate_semiconjugacy(u, n, sol.m, sol.delta, sol.L, budget);
  if (A2 != A || B2 != B) throw UnexpectedShape("no (m, delta, L) reproduces A and B");
  return sol;
}

std::string to_string(PairingVerdict::Kind k) {
  switch (k) {
    case PairingVerdict::Kind::Paired:
      return "Paired";
    case PairingVerdict::Kind::NotPaired:
      return "NotPaired";
    case PairingVerdict::Kind::ExceptionalInput:
      return "ExceptionalInput";
  }
  return "?";
}

PairingVerdict classify_unicritical_pair(const UnicriticalMap& u1, const UnicriticalMap& u2) {
  require_same_field(u1.c.field(), u2.c.field(), "classify_unicritical_pair");
  PairingVerdict v;
  if (u1.is_exceptional() || u2.is_exceptional()) {
    v.kind = PairingVerdict::Kind::ExceptionalInput;
    return v;
  }
  if (u1.d != u2.d) return v;
  const FieldElement zeta = u2.c / u1.c;
  if (zeta.pow(u1.d - 1).is_one()) {
    v.kind = PairingVerdict::Kind::Paired;
    v.zeta = zeta;
  }
  return v;
}

std::vector<LinearPoly> symmetries_of(const Poly& g) {
  const int D = g.degree();
  if (D < 2) throw PreconditionViolated("symmetries_of needs deg g >= 2");
  const FieldPtr& F = g.field();
  std::vector<LinearPoly> out{LinearPoly::identity(F)};
  for (const auto& a : roots_of_unity(F, D)) {
    if (a.is_one()) continue;
    // Matching x^(D-1): lead*D*a^(D-1)*b + g_(D-1)*a^(D-1) = g_(D-1).
    const FieldElement aD1 = a.pow(D - 1);
    const FieldElement b = (g.coeff(D - 1) - g.coeff(D - 1) * aD1) / (g.leading() * FieldElement(F, D) * aD1);
    LinearPoly L(a, b);
    if (compose(g, L.as_poly()) == g) out.push_back(L);
  }
  return out;
}

std::optional<int> is_iterate_of(const Poly& G, const Poly& g, int bound, const Budget& budget) {
  require_same_field(G.field(), g.field(), "is_iterate_of");
  if (g.degree() < 2 || G.degree() < 1) return std::nullopt;
  long deg = 1;
  for (int m = 0; m <= bound; ++m) {
    if (deg == G.degree()) {
      if (iterate(g, m, budget) == G) return m;
      return std::nullopt;
    }
    if (deg > G.degree()) return std::nullopt;
    deg *= g.degree();
  }
  return std::nullopt;
}

GapData gap_data(const Poly& P) {
  if (P.degree() < 1) throw PreconditionViolated("gap_data of a constant polynomial");
  GapData out;
  out.D = P.degree();
  int g = 0;
  for (int i = out.D - 1; i >= 0; --i) {
    if (P.coeff(i).is_zero()) continue;
    if (!out.m) out.m = out.D - i;
    g = std::gcd(g, out.D - i);
  }
  out.eta = out.m ? g : out.D;
  return out;
}

}  // namespace splitdyn
