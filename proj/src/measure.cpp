#include "splitdyn/measure.hpp"

#include <cmath>
#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <random>

#include "splitdyn/errors.hpp"

namespace splitdyn {

EmpiricalMeasure EmpiricalMeasure::pushforward(const ComplexMap& f) const {
  if (dimension != 1) throw PreconditionViolated("pushforward needs a measure on P^1");
  EmpiricalMeasure out = *this;
  for (auto& p : out.x) p = f(p);
  return out;
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool finite_point(const ComplexPoint& p) { return std::isfinite(p.w.real()) && std::isfinite(p.w.imag()); }

std::vector<ComplexPoint> run_chain(const ComplexMap& f, std::size_t count, int burn_in, std::uint64_t seed, int chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(chain)};
  std::mt19937_64 rng(seq);
  auto fresh_start = [&] { return ComplexPoint::from(cplx(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1)); };
  ComplexPoint z = fresh_start();
  std::vector<ComplexPoint> out;
  out.reserve(count);
  const std::size_t total = count + static_cast<std::size_t>(std::max(burn_in, 0));
  std::size_t steps = 0;
  while (out.size() < count) {
    const auto pre = f.preimages(z);
    const std::size_t pick = static_cast<std::size_t>(rng() % pre.size());
    if (!finite_point(pre[pick])) {
      // Solver failure near a critical value: restart the chain.
      z = fresh_start();
      steps = 0;
      continue;
    }
    z = pre[pick];
    ++steps;
    if (steps > static_cast<std::size_t>(std::max(burn_in, 0))) out.push_back(z);
    if (steps > 4 * total + 1000) throw ConvergenceFailure("inverse iteration kept failing");
  }
  return out;
}

}  // namespace

namespace {
std::atomic<int> sampling_threads{kSamplingChains};
}

void set_sampling_threads(int threads) { sampling_threads = std::clamp(threads, 1, kSamplingChains); }

int get_sampling_threads() { return sampling_threads; }

EmpiricalMeasure sample_invariant_measure(const ComplexMap& f, std::size_t count, int burn_in, std::uint64_t seed) {
  if (count == 0) throw PreconditionViolated("sample count must be positive");
  std::vector<std::vector<ComplexPoint>> parts(kSamplingChains);
  std::vector<std::exception_ptr> errors(kSamplingChains);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < kSamplingChains; k = next++) {
      const std::size_t share = count / kSamplingChains + (static_cast<std::size_t>(k) < count % kSamplingChains ? 1 : 0);
      try {
        parts[k] = run_chain(f, share, burn_in, seed, k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < sampling_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  EmpiricalMeasure m;
  m.seed = seed;
  for (auto& part : parts) m.x.insert(m.x.end(), part.begin(), part.end());
  m.weights.assign(m.x.size(), 1.0 / static_cast<double>(m.x.size()));
  return m;
}

namespace {

// Coefficients of C(s, y) in y (coordinate 1) or C(x, s) in x (coordinate 2),
// scaled by a common factor when s is stored inverted.
std::vector<cplx> fibre_polynomial(const BiCurve& C, const ComplexPoint& s, int coordinate) {
  const BPoly p = coordinate == 1 ? C.defining() : swap_variables(C.defining());
  const int dx = p.deg_x();
  std::vector<cplx> out;
  for (const auto& col : p.c) {
    cplx acc = 0;
    if (!s.inverted) {
      for (int i = col.degree(); i >= 0; --i) acc = acc * s.w + col.coeff(i).get_d();
    } else {
      // s^-dx * sum c_i s^i = sum c_i w^(dx - i).
      for (int i = 0; i <= dx; ++i) acc = acc * s.w + col.coeff(i).get_d();
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace

EmpiricalMeasure curve_pullback_measure(const BiCurve& C, const ComplexMap& f, int coordinate, std::size_t count,
                                        std::uint64_t seed, int burn_in) {
  if (coordinate != 1 && coordinate != 2) throw PreconditionViolated("coordinate must be 1 or 2");
  const int fibre_degree = coordinate == 1 ? C.deg_y() : C.deg_x();
  if (fibre_degree < 1) throw PreconditionViolated("projection has no finite fibres");
  const EmpiricalMeasure base = sample_invariant_measure(f, count, burn_in, seed);
  EmpiricalMeasure m;
  m.dimension = 2;
  m.seed = seed;
  const double w = 1.0 / (static_cast<double>(base.size()) * fibre_degree);
  for (const auto& s : base.x) {
    std::vector<cplx> poly = fibre_polynomial(C, s, coordinate);
    double scale = 0;
    for (const auto& c : poly) scale = std::max(scale, std::abs(c));
    std::size_t top = poly.size();
    while (top > 0 && std::abs(poly[top - 1]) <= 1e-13 * scale) --top;
    poly.resize(top);
    std::vector<ComplexPoint> fibre;
    for (const auto& r : polynomial_roots(poly)) fibre.push_back(ComplexPoint::from(r));
    while (static_cast<int>(fibre.size()) < fibre_degree) fibre.push_back(ComplexPoint::infinity());
    for (const auto& t : fibre) {
      m.x.push_back(coordinate == 1 ? s : t);
      m.y.push_back(coordinate == 1 ? t : s);
      m.weights.push_back(w);
    }
  }
  return m;
}

namespace {

constexpr int kFine = 32;
constexpr int kHarmonics = 15;
constexpr int kBoxFeatures = kFine * kFine + 8 * 8 + 4 * 4;
constexpr int kFeatures1 = kBoxFeatures + kHarmonics;

struct Rotation {
  double m[3][3];
  Rotation() {
    const double n = std::sqrt(14.0), ax = 1 / n, ay = 2 / n, az = 3 / n, t = 0.7;
    const double c = std::cos(t), s = std::sin(t), C = 1 - c;
    const double r[3][3] = {{c + ax * ax * C, ax * ay * C - az * s, ax * az * C + ay * s},
                            {ay * ax * C + az * s, c + ay * ay * C, ay * az * C - ax * s},
                            {az * ax * C - ay * s, az * ay * C + ax * s, c + az * az * C}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = r[i][j];
  }
};

struct Located {
  int fine;
  int coarse8;
  int coarse4;
  double harm[kHarmonics];
};

Located locate(const ComplexPoint& p) {
  static const Rotation R;
  const auto s = p.sphere();
  double v[3];
  for (int i = 0; i < 3; ++i) v[i] = R.m[i][0] * s[0] + R.m[i][1] * s[1] + R.m[i][2] * s[2];
  const double X = v[0], Y = v[1], Z = std::clamp(v[2], -1.0, 1.0);
  const double pi = std::acos(-1.0);
  const double theta = std::acos(Z), phi = std::atan2(Y, X) + pi;
  const int ti = std::min(kFine - 1, static_cast<int>(theta / pi * kFine));
  const int pj = std::min(kFine - 1, static_cast<int>(phi / (2 * pi) * kFine));
  Located l;
  l.fine = ti * kFine + pj;
  l.coarse8 = (ti / 4) * 8 + pj / 4;
  l.coarse4 = (ti / 8) * 4 + pj / 8;
  const double h[kHarmonics] = {X,
                                Y,
                                Z,
                                X * Y,
                                X * Z,
                                Y * Z,
                                X * X - Y * Y,
                                (3 * Z * Z - 1) / 2,
                                X * X * X - 3 * X * Y * Y,
                                3 * X * X * Y - Y * Y * Y,
                                Z * (5 * Z * Z - 3) / 2,
                                X * (5 * Z * Z - 1) / 4,
                                Y * (5 * Z * Z - 1) / 4,
                                Z * (X * X - Y * Y),
                                X * Y * Z};
  std::copy(h, h + kHarmonics, l.harm);
  return l;
}

void add_marginal(std::vector<double>& acc, std::size_t offset, const Located& l, double w) {
  acc[offset + static_cast<std::size_t>(l.fine)] += w;
  acc[offset + kFine * kFine + static_cast<std::size_t>(l.coarse8)] += w;
  acc[offset + kFine * kFine + 64 + static_cast<std::size_t>(l.coarse4)] += w;
  for (int k = 0; k < kHarmonics; ++k) acc[offset + kBoxFeatures + static_cast<std::size_t>(k)] += w * l.harm[k];
}

std::vector<double> features(const EmpiricalMeasure& m) {
  if (m.size() == 0) throw PreconditionViolated("empty measure");
  constexpr int kLow = 8;  // harmonics of degree <= 2
  const std::size_t n = m.dimension == 1 ? kFeatures1 : 2 * kFeatures1 + kLow * kLow + 16 * 16;
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = m.weights[i];
    const Located lx = locate(m.x[i]);
    add_marginal(acc, 0, lx, w);
    if (m.dimension == 1) continue;
    const Located ly = locate(m.y[i]);
    add_marginal(acc, kFeatures1, ly, w);
    std::size_t off = 2 * kFeatures1;
    for (int a = 0; a < kLow; ++a)
      for (int b = 0; b < kLow; ++b) acc[off + static_cast<std::size_t>(a * kLow + b)] += w * lx.harm[a] * ly.harm[b];
    off += kLow * kLow;
    acc[off + static_cast<std::size_t>(lx.coarse4 * 16 + ly.coarse4)] += w;
  }
  return acc;
}

}  // namespace

double measure_discrepancy(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dimension != b.dimension) throw PreconditionViolated("measures of different dimension");
  const auto fa = features(a), fb = features(b);
  double worst = 0;
  for (std::size_t i = 0; i < fa.size(); ++i) worst = std::max(worst, std::fabs(fa[i] - fb[i]));
  return worst;
}

}  // namespace splitdyn
