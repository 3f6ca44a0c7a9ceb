#pragma once

// Curves in P^1 x P^1 given by an affine equation C(x, y) = 0, their images
// under split maps (x, y) -> (f^n(x), g^m(y)), and rational points on them.

#include <optional>
#include <string>
#include <vector>

#include "splitdyn/heights.hpp"
#include "splitdyn/poly.hpp"
#include "splitdyn/rational_map.hpp"
#include "splitdyn/zpoly.hpp"

namespace splitdyn {

/// Normalised defining polynomial: primitive integer coefficients, the
/// graded-lex leading term (total degree, then x-degree) positive.
class BiCurve {
 public:
  explicit BiCurve(const BPoly& defining);

  const BPoly& defining() const noexcept { return p_; }
  int deg_x() const { return p_.deg_x(); }
  int deg_y() const noexcept { return p_.deg_y(); }
  std::pair<int, int> bidegree() const { return {deg_x(), deg_y()}; }
  /// Every component projects dominantly onto both coordinates.
  bool is_transversal() const;
  /// Squarefree part, normalised.
  BiCurve squarefree() const;
  /// (i, j, coefficient of x^i y^j), graded-lex descending.
  std::vector<std::tuple<int, int, mpz_class>> monomials() const;
  /// E.g. "x^2 - y".
  std::string to_string() const;
  /// Stable text key used for exact cycle detection.
  std::string key() const;

  friend bool operator==(const BiCurve& a, const BiCurve& b) { return a.p_ == b.p_; }

 private:
  BPoly p_;
};

/// Builds C(x, y) from a polynomial in x and y over Q (denominators cleared).
BiCurve curve_from_rationals(const std::vector<std::tuple<int, int, mpq_class>>& terms);

/// (x, y) -> (f^n(x), g^m(y)).
struct SplitEndo {
  RationalMap f;
  RationalMap g;
  int n = 1;
  int m = 1;
};

/// Defining polynomial of Phi(C), by elimination through two resultants
/// computed at integer evaluation points and interpolated.
BiCurve image_curve(const BiCurve& C, const SplitEndo& phi);

bool is_invariant(const BiCurve& C, const SplitEndo& phi);

struct CurveOrbitReport {
  std::vector<std::string> keys;
  std::vector<std::pair<int, int>> bidegrees;
  std::optional<int> preperiod;
  std::optional<int> period;
  /// Why the search stopped without a repeat.
  std::string undecided_reason;
  bool decided() const { return period.has_value(); }
};

/// Iterates image_curve until an exact repeat, max_steps images, or a
/// predicted bidegree above degree_budget.
CurveOrbitReport curve_preperiodicity(const BiCurve& C, const SplitEndo& phi, int max_steps, int degree_budget);

/// Squarefree part of f~^n(x) - L(f~^m(y)).
BiCurve ms_curve(const Poly& ftilde, int n, int m, const LinearPoly& L);

struct CurvePairsReport {
  /// (x, y) on C with x preperiodic for f and y preperiodic for g.
  std::vector<std::pair<ProjPointQ, ProjPointQ>> pairs;
  /// (x, y) on C with x preperiodic for f but y wandering for g.
  std::vector<std::pair<ProjPointQ, ProjPointQ>> transfer_failures;
  /// Preperiodic x whose whole fibre lies on C.
  std::vector<ProjPointQ> vertical_fibres;
  std::size_t preperiodic_x_count = 0;
  bool truncated = false;
};

CurvePairsReport preperiodic_pairs_on_curve(const BiCurve& C, const RationalMap& f, const RationalMap& g,
                                            std::size_t max_points = 4'000'000);

/// Rational y (including infinity) with C(x, y) = 0 on the projective
/// closure; absent when the whole fibre over x lies on C.
std::optional<std::vector<ProjPointQ>> rational_fibre(const BiCurve& C, const ProjPointQ& x);

}  // namespace splitdyn
