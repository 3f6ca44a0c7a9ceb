#include "splitdyn/numeric.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "splitdyn/errors.hpp"

namespace splitdyn {

ComplexPoint ComplexPoint::from(cplx z) {
  if (std::isinf(z.real()) || std::isinf(z.imag())) return infinity();
  if (std::abs(z) > 1.0) return {1.0 / z, true};
  return {z, false};
}

ComplexPoint ComplexPoint::from_homogeneous(cplx X, cplx Y) {
  if (X == cplx(0, 0) && Y == cplx(0, 0)) throw PreconditionViolated("[0:0] is not a point");
  if (std::abs(X) <= std::abs(Y)) return {X / Y, false};
  return {Y / X, true};
}

cplx ComplexPoint::value() const {
  if (!inverted) return w;
  if (w == cplx(0, 0)) return {INFINITY, INFINITY};
  return 1.0 / w;
}

std::pair<cplx, cplx> ComplexPoint::homogeneous() const {
  if (inverted) return {cplx(1, 0), w};
  return {w, cplx(1, 0)};
}

std::array<double, 3> ComplexPoint::sphere() const {
  const double r2 = std::norm(w);
  if (!inverted) return {2 * w.real() / (1 + r2), 2 * w.imag() / (1 + r2), (r2 - 1) / (r2 + 1)};
  return {2 * w.real() / (1 + r2), -2 * w.imag() / (1 + r2), (1 - r2) / (1 + r2)};
}

double chordal_distance(const ComplexPoint& a, const ComplexPoint& b) {
  const auto p = a.sphere(), q = b.sphere();
  return std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) + (p[2] - q[2]) * (p[2] - q[2]));
}

ComplexMap::ComplexMap(const RationalMap& f) : d_(f.degree()) {
  for (int i = 0; i <= d_; ++i) {
    F0_.emplace_back(f.F0().coeff(i).get_d(), 0.0);
    F1_.emplace_back(f.F1().coeff(i).get_d(), 0.0);
  }
}

ComplexMap::ComplexMap(std::vector<cplx> F0, std::vector<cplx> F1) : F0_(std::move(F0)), F1_(std::move(F1)) {
  if (F0_.size() != F1_.size() || F0_.size() < 2) throw PreconditionViolated("forms of mismatched degree");
  d_ = static_cast<int>(F0_.size()) - 1;
}

bool ComplexMap::is_polynomial() const {
  if (F1_[0] == cplx(0, 0)) return false;
  for (int i = 1; i <= d_; ++i)
    if (F1_[static_cast<std::size_t>(i)] != cplx(0, 0)) return false;
  return true;
}

namespace {

cplx eval_form(const std::vector<cplx>& F, cplx X, cplx Y) {
  const int d = static_cast<int>(F.size()) - 1;
  cplx acc = 0, yp = 1;
  std::vector<cplx> ypow(F.size());
  for (int i = 0; i <= d; ++i) {
    ypow[static_cast<std::size_t>(i)] = yp;
    yp *= Y;
  }
  for (int i = d; i >= 0; --i) acc = acc * X + F[static_cast<std::size_t>(i)] * ypow[static_cast<std::size_t>(d - i)];
  return acc;
}

}  // namespace

std::pair<cplx, cplx> ComplexMap::lift(cplx X, cplx Y) const { return {eval_form(F0_, X, Y), eval_form(F1_, X, Y)}; }

void ComplexMap::lift_with_derivative(cplx X, cplx Y, cplx dX, cplx dY, cplx& U, cplx& V, cplx& dU, cplx& dV) const {
  const std::size_t n = static_cast<std::size_t>(d_) + 1;
  std::vector<cplx> xp(n), dxp(n), yp(n), dyp(n);
  xp[0] = yp[0] = 1;
  dxp[0] = dyp[0] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    xp[i] = xp[i - 1] * X;
    dxp[i] = dxp[i - 1] * X + xp[i - 1] * dX;
    yp[i] = yp[i - 1] * Y;
    dyp[i] = dyp[i - 1] * Y + yp[i - 1] * dY;
  }
  U = V = dU = dV = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    const cplx m = xp[i] * yp[j], dm = dxp[i] * yp[j] + xp[i] * dyp[j];
    U += F0_[i] * m;
    dU += F0_[i] * dm;
    V += F1_[i] * m;
    dV += F1_[i] * dm;
  }
}

ComplexPoint ComplexMap::operator()(const ComplexPoint& z) const {
  const auto [X, Y] = z.homogeneous();
  const auto [U, V] = lift(X, Y);
  return ComplexPoint::from_homogeneous(U, V);
}

cplx ComplexMap::affine(cplx z) const {
  const auto [U, V] = lift(z, 1.0);
  if (V == cplx(0, 0)) return {INFINITY, INFINITY};
  return U / V;
}

cplx ComplexMap::chart_derivative(const ComplexPoint& z) const {
  cplx U, V, dU, dV;
  if (z.inverted) lift_with_derivative(1.0, z.w, 0.0, 1.0, U, V, dU, dV);
  else lift_with_derivative(z.w, 1.0, 1.0, 0.0, U, V, dU, dV);
  if (std::abs(U) <= std::abs(V)) return (dU * V - U * dV) / (V * V);
  return (dV * U - V * dU) / (U * U);
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& c_in) {
  std::vector<cplx> c = c_in;
  while (!c.empty() && c.back() == cplx(0, 0)) c.pop_back();
  if (c.size() <= 1) return {};
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 1) return {-c[0] / c[1]};
  if (n == 2) {
    const cplx a = c[2], b = c[1], cc = c[0];
    cplx s = std::sqrt(b * b - 4.0 * a * cc);
    if ((std::conj(b) * s).real() < 0) s = -s;
    const cplx q = -0.5 * (b + s);
    if (q == cplx(0, 0)) return {0.0, 0.0};
    return {q / a, cc / q};
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx p = 0, dp = 0;
      for (int i = n; i >= 0; --i) {
        dp = dp * r + p;
        p = p * r + c[static_cast<std::size_t>(i)];
      }
      if (dp == cplx(0, 0)) break;
      const cplx step = p / dp;
      if (!(std::abs(step) < 1e-3 * (1 + std::abs(r)))) break;
      r -= step;
    }
  }
  return roots;
}

std::vector<ComplexPoint> ComplexMap::preimages(const ComplexPoint& z) const {
  const auto [z0, z1] = z.homogeneous();
  std::vector<cplx> p(F0_.size());
  double scale = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = z1 * F0_[i] - z0 * F1_[i];
    scale = std::max(scale, std::abs(p[i]));
  }
  std::size_t top = p.size();
  while (top > 0 && std::abs(p[top - 1]) <= 1e-14 * scale) --top;
  p.resize(top);
  std::vector<ComplexPoint> out;
  for (const auto& r : polynomial_roots(p)) out.push_back(ComplexPoint::from(r));
  while (static_cast<int>(out.size()) < d_) out.push_back(ComplexPoint::infinity());
  return out;
}

namespace {

// The fixed-point form H(X, Y) = X_n Y - Y_n X pulled back through a unitary
// change of coordinates (X, Y) = (a w - conj(b), b w + conj(a)).
struct FixedPointEquation {
  const ComplexMap& f;
  int n;
  cplx a{0.8 * std::cos(0.3), 0.8 * std::sin(0.3)};
  cplx b{0.6 * std::cos(1.1), 0.6 * std::sin(1.1)};

  ComplexPoint point(cplx w) const { return ComplexPoint::from_homogeneous(a * w - std::conj(b), b * w + std::conj(a)); }

  // h(w) and h'(w), both multiplied by the same positive constant when
  // rescale is set.
  void eval(cplx w, cplx& h, cplx& dh, bool rescale) const {
    const cplx X0 = a * w - std::conj(b), Y0 = b * w + std::conj(a);
    cplx X = X0, Y = Y0, dX = a, dY = b;
    for (int k = 0; k < n; ++k) {
      cplx U, V, dU, dV;
      f.lift_with_derivative(X, Y, dX, dY, U, V, dU, dV);
      X = U;
      Y = V;
      dX = dU;
      dY = dV;
      if (rescale) {
        const double s = std::max(std::abs(X), std::abs(Y));
        if (s > 0 && std::isfinite(s)) {
          X /= s;
          Y /= s;
          dX /= s;
          dY /= s;
        }
      }
    }
    h = X * Y0 - Y * X0;
    dh = dX * Y0 + X * b - dY * X0 - Y * a;
  }
};

}  // namespace

PeriodicPointsResult periodic_points(const ComplexMap& f, int n, double tol) {
  if (n < 1) throw PreconditionViolated("period must be >= 1");
  PeriodicPointsResult result;
  const FixedPointEquation eq{f, n};
  double deg = std::pow(static_cast<double>(f.degree()), n) + 1;
  if (deg > 20000) throw ResourceLimit("fixed-point equation of degree above 20000");
  const int D = static_cast<int>(deg);
  result.equation_degree = D;

  std::vector<cplx> w(static_cast<std::size_t>(D));
  bool seeded = false;
  if (D <= 60) {
    const int M = D + 1;
    std::vector<cplx> vals(static_cast<std::size_t>(M)), coeffs(static_cast<std::size_t>(M));
    const double pi = std::acos(-1.0);
    for (int k = 0; k < M; ++k) {
      cplx h, dh;
      eq.eval(std::polar(1.0, 2 * pi * k / M), h, dh, false);
      vals[static_cast<std::size_t>(k)] = h;
    }
    for (int j = 0; j < M; ++j) {
      cplx s = 0;
      for (int k = 0; k < M; ++k) s += vals[static_cast<std::size_t>(k)] * std::polar(1.0, -2 * pi * j * k / M);
      coeffs[static_cast<std::size_t>(j)] = s / static_cast<double>(M);
    }
    auto roots = polynomial_roots(coeffs);
    if (static_cast<int>(roots.size()) == D) {
      w = roots;
      seeded = true;
    }
  } else {
    result.note = "equation degree " + std::to_string(D) + " above 60: Aberth iteration from a circle, no companion seeding";
  }
  if (!seeded) {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < D; ++k) w[static_cast<std::size_t>(k)] = std::polar(1.0, 2 * pi * k / D + 0.4);
  }

  // Gauss-Seidel Aberth iteration.
  std::vector<double> last_step(static_cast<std::size_t>(D), INFINITY);
  for (int iter = 0; iter < 1000; ++iter) {
    double worst = 0;
    for (int i = 0; i < D; ++i) {
      cplx h, dh;
      eq.eval(w[static_cast<std::size_t>(i)], h, dh, true);
      if (h == cplx(0, 0)) {
        last_step[static_cast<std::size_t>(i)] = 0;
        continue;
      }
      const cplx ratio = h / dh;
      cplx sum = 0;
      for (int j = 0; j < D; ++j)
        if (j != i) sum += 1.0 / (w[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(j)]);
      const cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      w[static_cast<std::size_t>(i)] -= step;
      last_step[static_cast<std::size_t>(i)] = std::abs(step) / (1 + std::abs(w[static_cast<std::size_t>(i)]));
      worst = std::max(worst, last_step[static_cast<std::size_t>(i)]);
    }
    if (worst < 1e-15) break;
  }

  const double match = std::max(1e-6, 1e3 * tol);
  std::vector<ComplexPoint> pts;
  std::vector<bool> converged;
  for (int i = 0; i < D; ++i) {
    pts.push_back(eq.point(w[static_cast<std::size_t>(i)]));
    converged.push_back(last_step[static_cast<std::size_t>(i)] < 1e-9);
  }
  auto orbit_of = [&](const ComplexPoint& z) {
    std::vector<ComplexPoint> orbit{z};
    for (int k = 1; k <= n; ++k) orbit.push_back(f(orbit.back()));
    return orbit;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const ComplexPoint& z = pts[i];
    bool duplicate = false;
    for (const auto& q : result.points)
      if (chordal_distance(q.point, z) < match) duplicate = true;
    if (duplicate) continue;
    const auto orbit = orbit_of(z);
    bool exact = true;
    for (int k = 1; k < n; ++k)
      if (n % k == 0 && chordal_distance(orbit[static_cast<std::size_t>(k)], z) < match) exact = false;
    if (!exact) continue;
    // Multiplier along the computed orbit, ending in the chart of z.
    cplx lambda = 1;
    for (int k = 0; k < n; ++k) lambda *= f.chart_derivative(orbit[static_cast<std::size_t>(k)]);
    const ComplexPoint& end = orbit[static_cast<std::size_t>(n)];
    if (end.inverted != z.inverted && end.w != cplx(0, 0)) lambda *= -1.0 / (end.w * end.w);
    const bool ok = converged[i] && chordal_distance(end, z) < match;
    const int cycle = result.cycles++;
    for (int k = 0; k < n; ++k) {
      ComplexPoint member = orbit[static_cast<std::size_t>(k)];
      // Snap to the computed root when one matches.
      for (const auto& q : pts)
        if (chordal_distance(q, member) < match) {
          member = q;
          break;
        }
      bool seen = false;
      for (const auto& q : result.points)
        if (chordal_distance(q.point, member) < match) seen = true;
      if (seen) continue;
      result.points.push_back({member, n, lambda, std::abs(lambda) > 1 + tol, cycle, ok});
    }
  }
  return result;
}

std::vector<cplx> taylor_coefficients(const ComplexMap& f, cplx a, int order) {
  const int d = f.degree();
  auto shift = [&](const std::vector<cplx>& p) {
    std::vector<cplx> c = p;
    // Repeated synthetic division by (x - a).
    for (int k = 0; k < d; ++k)
      for (int i = d - 1; i >= k; --i) c[static_cast<std::size_t>(i)] += a * c[static_cast<std::size_t>(i + 1)];
    c.resize(static_cast<std::size_t>(std::max(order, d) + 1), 0.0);
    return c;
  };
  const std::vector<cplx> u = shift(f.F0()), v = shift(f.F1());
  if (v[0] == cplx(0, 0)) throw PreconditionViolated("the point is a pole");
  std::vector<cplx> q(static_cast<std::size_t>(order + 1));
  for (int k = 0; k <= order; ++k) {
    cplx s = u[static_cast<std::size_t>(k)];
    for (int j = 1; j <= k; ++j) s -= v[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(k - j)];
    q[static_cast<std::size_t>(k)] = s / v[0];
  }
  return q;
}

namespace {

// Truncated product of power series.
std::vector<cplx> mul_series(const std::vector<cplx>& a, const std::vector<cplx>& b, int order) {
  std::vector<cplx> r(static_cast<std::size_t>(order + 1), 0.0);
  for (int i = 0; i <= order; ++i) {
    if (a[static_cast<std::size_t>(i)] == cplx(0, 0)) continue;
    for (int j = 0; i + j <= order; ++j) r[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  }
  return r;
}

// sum_{j >= from} a_j h^j truncated to the order, h without constant term.
std::vector<cplx> compose_series(const std::vector<cplx>& a, const std::vector<cplx>& h, int order, int from) {
  std::vector<cplx> acc(static_cast<std::size_t>(order + 1), 0.0), power = h;
  for (int j = 1; j <= order; ++j) {
    if (j >= from)
      for (int k = 0; k <= order; ++k) acc[static_cast<std::size_t>(k)] += a[static_cast<std::size_t>(j)] * power[static_cast<std::size_t>(k)];
    power = mul_series(power, h, order);
  }
  return acc;
}

}  // namespace

double series_radius(const std::vector<cplx>& coeffs) {
  const int N = static_cast<int>(coeffs.size());
  double r = INFINITY;
  for (int k = std::max(2, N / 2); k <= N; ++k) {
    const double m = std::abs(coeffs[static_cast<std::size_t>(k - 1)]);
    if (m > 0) r = std::min(r, std::pow(m, -1.0 / k));
  }
  return r;
}

cplx PoincareSeries::operator()(cplx w) const {
  cplx acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = (acc + coeffs[k]) * w;
  return x0 + acc;
}

PoincareSeries poincare_series(const ComplexMap& f, cplx x0, int order) {
  if (order < 1) throw PreconditionViolated("order must be >= 1");
  const std::vector<cplx> a = taylor_coefficients(f, x0, order);
  if (std::abs(a[0] - x0) > 1e-8 * (1 + std::abs(x0))) throw PreconditionViolated("x0 is not a fixed point");
  PoincareSeries s;
  s.x0 = x0;
  s.lambda = a[1];
  if (std::abs(s.lambda) <= 1) throw NonRepelling("fixed point with |lambda| <= 1");
  std::vector<cplx> h(static_cast<std::size_t>(order + 1), 0.0);
  h[1] = 1;
  for (int k = 2; k <= order; ++k) {
    const std::vector<cplx> rhs = compose_series(a, h, k, 2);
    h[static_cast<std::size_t>(k)] = rhs[static_cast<std::size_t>(k)] / (std::pow(s.lambda, k) - s.lambda);
  }
  s.coeffs.assign(h.begin() + 1, h.end());
  const std::vector<cplx> lhs = compose_series(a, h, order, 1);
  for (int k = 1; k <= order; ++k)
    s.residual = std::max(s.residual, std::abs(lhs[static_cast<std::size_t>(k)] - h[static_cast<std::size_t>(k)] * std::pow(s.lambda, k)));
  s.radius = series_radius(s.coeffs);
  return s;
}

double germ_equality_residual(const ComplexMap& f, const ComplexMap& g, int n, int m, const std::vector<cplx>& h,
                              cplx x0, double r, int rings, int spokes) {
  if (h.size() < 2 || h[1] == cplx(0, 0)) throw PreconditionViolated("h must have h'(x0) != 0");
  if (!(r > 0)) throw PreconditionViolated("radius must be positive");
  const std::vector<cplx> hc(h.begin() + 1, h.end());
  const double radius = series_radius(hc);
  auto eval_h = [&](cplx u) {
    if (std::abs(u - x0) > 0.5 * radius) throw PreconditionViolated("grid leaves the convergence radius of h");
    cplx acc = 0;
    for (std::size_t k = h.size(); k-- > 0;) acc = acc * (u - x0) + h[k];
    return acc;
  };
  auto iterate_affine = [](const ComplexMap& F, int k, cplx z) {
    for (int i = 0; i < k; ++i) z = F.affine(z);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw PreconditionViolated("orbit reaches a pole");
    return z;
  };
  const double pi = std::acos(-1.0);
  double worst = 0;
  for (int i = 0; i <= rings; ++i) {
    const double rho = r * i / rings;
    for (int j = 0; j < (i == 0 ? 1 : spokes); ++j) {
      const cplx z = x0 + std::polar(rho, 2 * pi * j / spokes);
      const cplx lhs = eval_h(iterate_affine(f, n, z));
      const cplx rhs = iterate_affine(g, m, eval_h(z));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

GrayImage julia_render(const ComplexMap& f, int resolution, int iterations, RenderWindow window) {
  if (resolution < 1 || iterations < 1) throw PreconditionViolated("resolution and iterations must be positive");
  GrayImage img;
  img.width = img.height = resolution;
  img.pixels.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  const bool poly = f.is_polynomial();
  const int d = f.degree();
  double escape = 2.0;
  if (poly) {
    const cplx lead = f.F0()[static_cast<std::size_t>(d)] / f.F1()[0];
    double s = 0;
    for (int i = 0; i < d; ++i) s += std::abs(f.F0()[static_cast<std::size_t>(i)] / f.F1()[0]);
    escape = std::max(1.0, (2.0 + s) / std::abs(lead));
    if (window.radius <= 0) window.radius = 0.6 * escape;
  } else if (window.radius <= 0) {
    window.radius = 2.0;
  }
  const double step = 2 * window.radius / resolution;
  std::vector<int> counts(img.pixels.size(), 0);
  std::vector<double> shade(img.pixels.size(), 0.0);
  int max_count = 0;
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const cplx z0 = window.center + cplx(-window.radius + (col + 0.5) * step, window.radius - (row + 0.5) * step);
      const std::size_t idx = static_cast<std::size_t>(row) * resolution + col;
      if (poly) {
        cplx z = z0;
        for (int k = 1; k <= iterations; ++k) {
          z = f.affine(z);
          if (!(std::abs(z) <= escape)) {
            counts[idx] = k;
            max_count = std::max(max_count, k);
            break;
          }
        }
      } else {
        ComplexPoint z = ComplexPoint::from(z0);
        double log_deriv = 0, best = -INFINITY;
        for (int k = 0; k < iterations; ++k) {
          const ComplexPoint next = f(z);
          // Spherical derivative: |f'| (1 + |z|^2) / (1 + |f(z)|^2) in any chart.
          const double cd = std::abs(f.chart_derivative(z));
          log_deriv += std::log(std::max(cd, 1e-300)) + std::log1p(std::norm(z.w)) - std::log1p(std::norm(next.w));
          best = std::max(best, log_deriv);
          z = next;
        }
        const double pixel = std::log(2 * step / (1 + std::norm(z0)));
        const double t = (best + pixel) / std::log(10.0);
        shade[idx] = std::clamp((t + 2) / 2, 0.0, 1.0);
      }
    }
  }
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double v = poly ? (max_count > 0 ? static_cast<double>(counts[i]) / max_count : 0.0) : shade[i];
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(255 * v));
  }
  return img;
}

}  // namespace splitdyn
