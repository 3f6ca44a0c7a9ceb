#pragma once

// Canonical heights over Q: local contributions at every place, certified
// tails, and the terminating preperiodicity decision.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "splitdyn/rational_map.hpp"

namespace splitdyn {

/// The archimedean place or a prime p. N_v is always 1 over Q.
struct Place {
  bool archimedean = true;
  mpz_class p = 0;

  static Place infinity() { return {}; }
  static Place prime(const mpz_class& p);
  int multiplier() const noexcept { return 1; }
  /// "inf" or the decimal prime.
  std::string to_string() const;
  friend bool operator==(const Place& a, const Place& b) { return a.archimedean == b.archimedean && a.p == b.p; }
};

/// log max(|a|, |b|).
double naive_height(const ProjPointQ& x);

struct PlaceTerm {
  Place place;
  /// ord_p(alpha) at a prime; 0 at infinity.
  long ord = 0;
  /// log|alpha|_v.
  double log_abs = 0.0;
};

struct ProductFormulaReport {
  std::vector<PlaceTerm> terms;
  /// |alpha| == prod p^ord_p(alpha), checked in exact arithmetic.
  bool exact_zero = false;
  /// Floating sum of the log_abs terms, for display.
  double float_sum = 0.0;
};

ProductFormulaReport product_formula_check(const mpq_class& alpha);

/// C_v with |log||F(z)||_v - d log||z||_v| <= C_v for every z != 0.
struct HeightConstants {
  double c_inf = 0.0;
  /// Primes dividing Res(F) with their C_p = ord_p(Res) log p.
  std::vector<std::pair<mpz_class, double>> c_p;
  double total() const;
};

HeightConstants height_constants(const RationalMap& f);

/// The places carrying a possibly nonzero local height: infinity and the
/// primes dividing Res(F).
std::vector<Place> relevant_places(const RationalMap& f);

/// lim d^-n log||F^n(x~)||_v for the primitive integral lift x~, within tol.
double local_canonical_height(const RationalMap& f, const ProjPointQ& x, const Place& v, double tol);

struct HeightValue {
  double value = 0.0;
  double error_radius = 0.0;
  std::vector<std::pair<Place, double>> per_place;
};

HeightValue canonical_height(const RationalMap& f, const ProjPointQ& x, double tol);

struct PreperiodicityDecision {
  bool preperiodic = false;
  /// Orbit x, f(x), ... up to the first repeat (preperiodic) or the first
  /// point above the escape bound (wandering).
  std::vector<ProjPointQ> orbit;
  int tail = 0;
  int period = 0;
  /// B = C/(d-1) + 1.
  double escape_bound = 0.0;
};

/// Escape bound B: every preperiodic point has naive height below B.
double escape_bound(const RationalMap& f);

PreperiodicityDecision is_preperiodic(const RationalMap& f, const ProjPointQ& x);

struct PreperiodicEnumeration {
  std::vector<ProjPointQ> points;
  double escape_bound = 0.0;
  double searched_bound = 0.0;
  /// Set when the caller's bound is below the escape bound; the search then
  /// still runs up to the escape bound.
  std::optional<std::string> warning;
  /// Set when the search stopped below the escape bound for lack of budget.
  bool truncated = false;
};

/// All rational preperiodic points, sorted. Polynomials are searched in the
/// box cut out by their local escape radii (denominators dividing a bound
/// read off the coefficients, numerators bounded by the archimedean
/// radius); other maps in the naive-height box up to the escape bound.
/// Either search is complete. When more than max_points
/// candidates would have to be examined this throws ResourceLimit, or, with
/// truncate set, searches the largest box that fits and flags the result.
PreperiodicEnumeration preperiodic_points(const RationalMap& f, double height_bound,
                                          std::size_t max_points = 4'000'000, bool truncate = false);

}  // namespace splitdyn
