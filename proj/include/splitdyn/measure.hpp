#pragma once

// Empirical measures: the maximal-entropy measure by inverse iteration,
// its pullbacks to curves, and the fixed test-function discrepancy.

#include <cstdint>
#include <vector>

#include "splitdyn/curves.hpp"
#include "splitdyn/numeric.hpp"

namespace splitdyn {

/// Weighted points on the sphere (dimension 1) or on P^1 x P^1 (dimension 2,
/// second coordinates in y).
struct EmpiricalMeasure {
  int dimension = 1;
  std::vector<ComplexPoint> x;
  std::vector<ComplexPoint> y;
  std::vector<double> weights;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return x.size(); }
  /// Pushforward under z -> f(z) (dimension 1).
  EmpiricalMeasure pushforward(const ComplexMap& f) const;
};

/// Number of independent sampling chains; chain k is seeded from (seed, k).
inline constexpr int kSamplingChains = 8;

/// Worker threads used for the chains (clamped to 1..kSamplingChains).
/// Output does not depend on this setting.
void set_sampling_threads(int threads);
int get_sampling_threads();

/// Random backward orbits: each step picks one of the d preimages
/// uniformly. Chains run in parallel and are concatenated in chain order.
EmpiricalMeasure sample_invariant_measure(const ComplexMap& f, std::size_t count, int burn_in, std::uint64_t seed);

/// pi_i^* mu_f / deg(pi_i) on C, from `count` samples of mu_f.
EmpiricalMeasure curve_pullback_measure(const BiCurve& C, const ComplexMap& f, int coordinate, std::size_t count,
                                        std::uint64_t seed, int burn_in = 50);

/// Version tag of the test-function dictionary.
inline constexpr int kDiscrepancyDictionaryVersion = 1;

/// Largest absolute difference of averages over the fixed dictionary: box
/// indicators on a 32x32 (theta, phi) grid of the rotated sphere with 4x4
/// and 8x8 coarsenings, and real spherical harmonics of degree 1 to 3. In
/// dimension 2 the dictionary covers both marginals, products of harmonics
/// of degree <= 2, and products of coarse 4x4 boxes.
double measure_discrepancy(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

}  // namespace splitdyn
