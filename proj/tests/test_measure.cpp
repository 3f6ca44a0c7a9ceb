#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace splitdyn;
using namespace testing_helpers;

namespace {

ComplexMap CM(const char* s) { return ComplexMap(M(s)); }

// Point mass at z, replicated so both measures have the same size.
EmpiricalMeasure point_mass(cplx z, std::size_t n) {
  EmpiricalMeasure m;
  m.x.assign(n, ComplexPoint::from(z));
  m.weights.assign(n, 1.0 / static_cast<double>(n));
  return m;
}

}  // namespace

TEST(Measure, UnitCircleForSquaring) {
  const auto m = sample_invariant_measure(CM("x^2"), 2000, 20, 5);
  ASSERT_EQ(m.size(), 2000u);
  double total = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    EXPECT_NEAR(std::abs(m.x[k].value()), 1.0, 1e-6);
    total += m.weights[k];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Measure, IntervalForChebyshev) {
  const auto m = sample_invariant_measure(CM("x^2 - 2"), 2000, 20, 6);
  double mean = 0;
  for (const auto& p : m.x) {
    const cplx z = p.value();
    EXPECT_LT(std::abs(z.imag()), 1e-6);
    EXPECT_LE(std::abs(z.real()), 2 + 1e-6);
    mean += z.real();
  }
  // The arcsine law is symmetric about 0.
  EXPECT_NEAR(mean / static_cast<double>(m.size()), 0, 0.15);
}

TEST(Measure, InvarianceUnderPushforward) {
  const ComplexMap f = CM("x^2 - 1");
  const auto m = sample_invariant_measure(f, 10000, 50, 7);
  EXPECT_LT(measure_discrepancy(m, m.pushforward(f)), 0.05);
}

TEST(Measure, DeterministicAndThreadIndependent) {
  const ComplexMap f = CM("x^3 + 1");
  const auto a = sample_invariant_measure(f, 1000, 10, 99);
  const auto b = sample_invariant_measure(f, 1000, 10, 99);
  const int saved = get_sampling_threads();
  set_sampling_threads(1);
  const auto c = sample_invariant_measure(f, 1000, 10, 99);
  set_sampling_threads(3);
  const auto d = sample_invariant_measure(f, 1000, 10, 99);
  set_sampling_threads(saved);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.x[k].w, b.x[k].w);
    EXPECT_EQ(a.x[k].w, c.x[k].w);
    EXPECT_EQ(a.x[k].w, d.x[k].w);
  }
  const auto other = sample_invariant_measure(f, 1000, 10, 100);
  EXPECT_NE(a.x[0].w, other.x[0].w);
  set_sampling_threads(100);
  EXPECT_EQ(get_sampling_threads(), kSamplingChains);
  set_sampling_threads(saved);
}

TEST(Measure, PullbacksToCurves) {
  const ComplexMap f = CM("x^2 - 1");
  const auto diag1 = curve_pullback_measure(C("y - x"), f, 1, 3000, 11);
  const auto diag2 = curve_pullback_measure(C("y - x"), f, 2, 3000, 12);
  EXPECT_EQ(diag1.dimension, 2);
  double total = 0;
  for (double w : diag1.weights) total += w;
  EXPECT_NEAR(total, 1.0, 1e-9);
  for (std::size_t k = 0; k < diag1.size(); ++k)
    EXPECT_LT(chordal_distance(diag1.x[k], diag1.y[k]), 1e-9);
  EXPECT_LT(measure_discrepancy(diag1, diag2), 0.05);

  // On the graph y = x^2 - 1 the coordinate-1 pullback has y = f(x).
  const auto graph = curve_pullback_measure(C("y = x^2 - 1"), f, 1, 2000, 13);
  total = 0;
  for (std::size_t k = 0; k < graph.size(); ++k) {
    total += graph.weights[k];
    EXPECT_LT(chordal_distance(f(graph.x[k]), graph.y[k]), 1e-8);
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Measure, Discrepancy) {
  const ComplexMap f = CM("x^2");
  const auto a = sample_invariant_measure(f, 10000, 20, 1);
  const auto b = sample_invariant_measure(f, 10000, 20, 2);
  EXPECT_EQ(measure_discrepancy(a, a), 0.0);
  EXPECT_LT(measure_discrepancy(a, b), 0.05);
  EXPECT_GE(measure_discrepancy(a, point_mass(0, 100)), 0.5);
}
