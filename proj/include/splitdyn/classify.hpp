#pragma once

// Unicritical maps x^d + c: the f_delta family, semiconjugacies
// f^n∘A = A∘B (generation and classification), the pairing criterion,
// linear symmetries, iterate detection and gap data.

#include <optional>
#include <utility>
#include <vector>

#include "splitdyn/poly.hpp"

namespace splitdyn {

/// x^d + c.
struct UnicriticalMap {
  int d = 2;
  FieldElement c;

  UnicriticalMap(int degree, FieldElement constant);
  Poly poly() const;
  /// c = 0, or d = 2 and c = -2.
  bool is_exceptional() const;
};

/// (x^delta + c)^(d/delta).
Poly f_delta(const UnicriticalMap& u, int delta);

struct SemiconjugacySolution {
  int m = 0;
  int delta = 1;
  LinearPoly L;
  friend bool operator==(const SemiconjugacySolution& a, const SemiconjugacySolution& b) {
    return a.m == b.m && a.delta == b.delta && a.L == b.L;
  }
};

/// A = f^m∘(x^delta + c)∘L and B = L^{-1}∘f_delta^n∘L.
std::pair<Poly, Poly> generate_semiconjugacy(const UnicriticalMap& u, int n, int m, int delta, const LinearPoly& L,
                                             const Budget& budget = {});

/// Reconstructs (A, B) from sol and checks f^n∘A = A∘B exactly.
bool intertwine_check(const UnicriticalMap& u, int n, const SemiconjugacySolution& sol, const Budget& budget = {});

/// The representation with the fewest outer factors of f: (m, delta, L)
/// with m >= 1 and delta = 1 is rewritten as (m - 1, d, L + c).
SemiconjugacySolution canonical_solution(const UnicriticalMap& u, const SemiconjugacySolution& sol);

/// Recovers the canonical (m, delta, L) with A = f^m∘(x^delta + c)∘L and
/// B = L^{-1}∘f_delta^n∘L. Throws NotASolution if f^n∘A != A∘B and
/// UnexpectedShape if no reconstruction reproduces (A, B).
SemiconjugacySolution classify_semiconjugacy(const UnicriticalMap& u, int n, const Poly& A, const Poly& B,
                                             const Budget& budget = {});

struct PairingVerdict {
  enum class Kind { Paired, NotPaired, ExceptionalInput };
  Kind kind = Kind::NotPaired;
  std::optional<FieldElement> zeta;
};
std::string to_string(PairingVerdict::Kind k);

/// Paired(zeta) iff d1 = d2 and zeta = c2/c1 satisfies zeta^(d1-1) = 1.
PairingVerdict classify_unicritical_pair(const UnicriticalMap& u1, const UnicriticalMap& u2);

/// Every L = ax + b over the field of g with g∘L = g; the identity first.
std::vector<LinearPoly> symmetries_of(const Poly& g);

/// m <= bound with G = g^m, when one exists.
std::optional<int> is_iterate_of(const Poly& G, const Poly& g, int bound, const Budget& budget = {});

struct GapData {
  int D = 0;
  /// D minus the next exponent with a nonzero coefficient; absent for monomials.
  std::optional<int> m;
  /// gcd of D - i over the lower exponents i present; D for monomials.
  int eta = 0;
};
GapData gap_data(const Poly& P);

}  // namespace splitdyn
