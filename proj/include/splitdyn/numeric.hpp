#pragma once

// Floating-point complex dynamics on the Riemann sphere: periodic points
// and multipliers, Poincaré linearisation series, germ residuals, Julia
// set rendering. Measures live in measure.hpp.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitdyn/rational_map.hpp"

namespace splitdyn {

using cplx = std::complex<double>;

/// A point of the Riemann sphere. When |z| > 1 the point is stored as
/// w = 1/z with inverted set; infinity is (0, inverted).
struct ComplexPoint {
  cplx w;
  bool inverted = false;

  static ComplexPoint from(cplx z);
  /// [X : Y] in homogeneous coordinates.
  static ComplexPoint from_homogeneous(cplx X, cplx Y);
  static ComplexPoint infinity() { return {cplx(0, 0), true}; }
  bool is_infinity() const { return inverted && w == cplx(0, 0); }
  /// The affine value (inf components at infinity).
  cplx value() const;
  /// Homogeneous coordinates with max(|X|, |Y|) = 1.
  std::pair<cplx, cplx> homogeneous() const;
  /// Point on the unit sphere under stereographic projection.
  std::array<double, 3> sphere() const;
};

/// Chordal distance on the unit sphere, in [0, 2].
double chordal_distance(const ComplexPoint& a, const ComplexPoint& b);

/// Binary forms (F0, F1) of degree d with complex coefficients; coefficient
/// i multiplies X^i Y^(d-i).
class ComplexMap {
 public:
  explicit ComplexMap(const RationalMap& f);
  ComplexMap(std::vector<cplx> F0, std::vector<cplx> F1);

  int degree() const noexcept { return d_; }
  bool is_polynomial() const;
  const std::vector<cplx>& F0() const noexcept { return F0_; }
  const std::vector<cplx>& F1() const noexcept { return F1_; }

  std::pair<cplx, cplx> lift(cplx X, cplx Y) const;
  /// Lift with the derivative of (F0, F1) along the direction (dX, dY).
  void lift_with_derivative(cplx X, cplx Y, cplx dX, cplx dY, cplx& U, cplx& V, cplx& dU, cplx& dV) const;
  ComplexPoint operator()(const ComplexPoint& z) const;
  /// Affine value f(z) for finite z (may be inf at poles).
  cplx affine(cplx z) const;
  /// Derivative read in the local charts at z and at f(z).
  cplx chart_derivative(const ComplexPoint& z) const;
  /// All preimages of z, with multiplicity.
  std::vector<ComplexPoint> preimages(const ComplexPoint& z) const;

 private:
  std::vector<cplx> F0_, F1_;
  int d_;
};

/// Roots of sum c[i] x^i (lowest first, nonzero leading coefficient):
/// companion-matrix eigenvalues polished by Newton steps.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& c);

struct PeriodicPointData {
  ComplexPoint point;
  int period = 1;
  cplx multiplier;
  bool repelling = false;
  /// Points of one cycle share a cycle index.
  int cycle = 0;
  bool converged = true;
};

struct PeriodicPointsResult {
  std::vector<PeriodicPointData> points;
  int cycles = 0;
  /// Degree of the fixed-point equation that was solved.
  int equation_degree = 0;
  /// Set when the equation was too large for companion seeding.
  std::optional<std::string> note;
};

/// Points of exact period n with multipliers, grouped into cycles.
PeriodicPointsResult periodic_points(const ComplexMap& f, int n, double tol = 1e-9);

/// sigma(w) = x0 + sum_{k>=1} s_k w^k with f(sigma(w)) = sigma(lambda w).
struct PoincareSeries {
  cplx x0;
  cplx lambda;
  /// coeffs[k-1] = s_k; s_1 = 1.
  std::vector<cplx> coeffs;
  double radius = 0.0;
  /// max |coefficient of f(sigma(w)) - sigma(lambda w)| through the order.
  double residual = 0.0;
  cplx operator()(cplx w) const;
};

/// Requires a repelling finite fixed point x0 of f (|lambda| > 1).
PoincareSeries poincare_series(const ComplexMap& f, cplx x0, int order);

/// Taylor coefficients of f at a finite point a through the given order:
/// f(a + h) = sum c[k] h^k.
std::vector<cplx> taylor_coefficients(const ComplexMap& f, cplx a, int order);

/// max over a polar grid in B(x0, r) of |h(f^n(z)) - g^m(h(z))|, where
/// h(u) = sum h[k] (u - x0)^k. Throws PreconditionViolated when the grid
/// leaves the estimated convergence radius of h.
double germ_equality_residual(const ComplexMap& f, const ComplexMap& g, int n, int m, const std::vector<cplx>& h,
                              cplx x0, double r, int rings = 8, int spokes = 32);

/// Radius of convergence estimated from the decay of the coefficients.
double series_radius(const std::vector<cplx>& coeffs);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

struct RenderWindow {
  cplx center{0, 0};
  /// Half-width of the square window; 0 picks one from the map.
  double radius = 0;
};

/// Escape-time image for polynomials (slow escape is bright), spherical
/// derivative distance estimate for other rational maps.
GrayImage julia_render(const ComplexMap& f, int resolution, int iterations, RenderWindow window = {});

}  // namespace splitdyn
