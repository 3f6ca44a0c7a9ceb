// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Expected values come from the oracles in this file.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "helpers.hpp"
#include "splitdyn/classify.hpp"
#include "splitdyn/errors.hpp"

using namespace splitdyn;
using namespace testing_helpers;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

const FieldPtr QQ = Field::rationals();

FieldElement q(const mpq_class& v) { return FieldElement(QQ, v); }

// The 20 nonzero grid values +-{1/5, 1/4, 1/3, 1/2, 2/3, 1, 3/2, 2, 5/2, 3}.
std::vector<mpq_class> rational_grid() {
  std::vector<mpq_class> g;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 5}, {1, 4}, {1, 3}, {1, 2}, {2, 3}, {1, 1}, {3, 2}, {2, 1}, {5, 2}, {3, 1}}) {
    g.emplace_back(a, b);
    g.emplace_back(-a, b);
  }
  for (auto& v : g) v.canonicalize();
  return g;
}

bool exceptional_value(int d, const mpq_class& c) { return c == 0 || (d == 2 && c == -2); }

Outcome pairing_grid() {
  // Every rational r with r^(d-1) = 1 lies among p/s with |p|, s <= 3; the
  // search checks the power directly.
  auto zetas = [](int d) {
    std::vector<mpq_class> out;
    for (int s = 1; s <= 3; ++s)
      for (int p = -3; p <= 3; ++p) {
        mpq_class r(p, s);
        r.canonicalize();
        mpq_class pw = 1;
        for (int k = 0; k < d - 1; ++k) pw *= r;
        if (pw == 1 && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
      }
    return out;
  };
  const auto grid = rational_grid();
  int cases = 0, paired = 0;
  for (int d1 = 2; d1 <= 5; ++d1)
    for (int d2 = 2; d2 <= 5; ++d2)
      for (const auto& c1 : grid)
        for (const auto& c2 : grid) {
          if (exceptional_value(d1, c1) || exceptional_value(d2, c2)) continue;
          // x -> zeta x conjugates x^d + c1 to zeta^(d-1) x^d + c1/zeta.
          bool expect = false;
          if (d1 == d2)
            for (const auto& z : zetas(d1)) expect = expect || c1 == z * c2;
          const auto v = classify_unicritical_pair(UnicriticalMap(d1, q(c1)), UnicriticalMap(d2, q(c2)));
          const bool got = v.kind == PairingVerdict::Kind::Paired;
          if (got != expect)
            return fail("d=" + std::to_string(d1) + "," + std::to_string(d2) + " c=" + c1.get_str() + "," + c2.get_str());
          ++cases;
          paired += got;
        }
  return {true, std::to_string(cases) + " cases, " + std::to_string(paired) + " paired"};
}

Outcome semiconjugacy_roundtrip() {
  std::mt19937_64 rng(2024);
  const std::vector<int> ds{2, 3, 4, 6};
  int done = 0;
  long largest = 0;
  // The largest cases (degree 7776) exceed the default coefficient budget.
  const Budget big{std::size_t{1} << 28};
  while (done < 200) {
    const int d = ds[rng() % ds.size()];
    const int n = 1 + static_cast<int>(rng() % 2), m = static_cast<int>(rng() % 3);
    std::vector<int> divs;
    for (int k = 1; k <= d; ++k)
      if (d % k == 0) divs.push_back(k);
    const int delta = divs[rng() % divs.size()];
    long degB = delta;
    for (int k = 0; k < m; ++k) degB *= d;
    long degA = degB;
    for (int k = 0; k < n; ++k) degA *= d;
    const UnicriticalMap u(d, q(random_rational(rng, 4, true)));
    if (u.is_exceptional()) continue;
    const LinearPoly L(q(random_rational(rng, 4, true)), q(random_rational(rng, 4)));
    const auto [A, B] = generate_semiconjugacy(u, n, m, delta, L, big);
    if (compose(iterate(u.poly(), n, big), A, big) != compose(A, B, big)) return fail("f^n(A) != A(B) at case " + std::to_string(done));
    const auto got = classify_semiconjugacy(u, n, A, B, big);
    if (!(got == canonical_solution(u, {m, delta, L}))) return fail("classification mismatch at case " + std::to_string(done));
    largest = std::max(largest, degA);
    ++done;
  }
  return {true, "200 cases, max deg f^n(A) " + std::to_string(largest)};
}

Outcome engstrom_oracle() {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 300; ++k) {
    const Poly A = random_poly(rng, 2 + static_cast<int>(rng() % 3), 5);
    const Poly Pp = random_poly(rng, 1 + static_cast<int>(rng() % 3), 5);
    const Poly D = random_poly(rng, 1 + static_cast<int>(rng() % 3), 5);
    // A(P(D)) written two ways.
    if (engstrom_left(A, compose(Pp, D), compose(A, Pp), D) != Pp) return fail("left at case " + std::to_string(k));
    if (engstrom_right(compose(A, Pp), D, A, compose(Pp, D)) != Pp) return fail("right at case " + std::to_string(k));
  }
  return {true, "300 triples"};
}

Outcome gap_preservation() {
  std::mt19937_64 rng(91);
  for (int k = 0; k < 100; ++k) {
    const int D = 2 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(D - 1));
    std::vector<mpq_class> c(static_cast<std::size_t>(D + 1), 0);
    c[D] = random_rational(rng, 5, true);
    c[D - m] = random_rational(rng, 5, true);
    for (int i = 0; i < D - m; ++i) c[i] = random_rational(rng, 5);
    const Poly p = Poly::from_rationals(QQ, c);
    const int n = 1 + static_cast<int>(rng() % 3);
    const Poly it = iterate(p, n);
    // Read the gap straight off the coefficients.
    int gap = 1;
    while (it.coeff(it.degree() - gap).is_zero()) ++gap;
    if (gap != m || gap_data(it).m != m) return fail("case " + std::to_string(k));
  }
  return {true, "100 polynomials"};
}

// Orbit search in exact arithmetic: a repeat means preperiodic, a naive
// height above 40 within the step limit is treated as escape.
bool brute_preperiodic(const RationalMap& f, ProjPointQ x) {
  std::set<std::string> seen;
  for (int k = 0; k < 80; ++k) {
    if (!seen.insert(x.to_string()).second) return true;
    if (naive_height(x) > 40) return false;
    x = f(x);
  }
  return false;
}

Outcome height_equation() {
  const std::vector<const char*> maps{"x^2 - 1", "(x^2 + 1)/(2x)", "x^2 + 1/4", "x^3 - 2x", "(x^2 - 2)/(3x)"};
  std::mt19937_64 rng(5);
  double worst = 0;
  for (const char* s : maps) {
    const RationalMap f = M(s);
    for (int k = 0; k < 10; ++k) {
      const ProjPointQ x(random_rational(rng, 20));
      const double h = canonical_height(f, x, 1e-10).value;
      const double hf = canonical_height(f, f(x), 1e-10).value;
      worst = std::max(worst, std::abs(hf - f.degree() * h));
    }
  }
  if (worst > 1e-6) return fail("functional equation defect " + std::to_string(worst));
  int zeros = 0;
  for (const char* s : maps) {
    const RationalMap f = M(s);
    std::vector<ProjPointQ> box{ProjPointQ::infinity()};
    for (long b = 1; b <= 4; ++b)
      for (long a = -8; a <= 8; ++a)
        if (std::gcd(a, b) == 1) box.emplace_back(mpz_class(a), mpz_class(b));
    for (const auto& x : box) {
      const bool pre = brute_preperiodic(f, x);
      const double h = canonical_height(f, x, 1e-10).value;
      if (pre && std::abs(h) > 1e-8) return fail(std::string(s) + " nonzero height at preperiodic " + x.to_string());
      if (!pre && h <= 1e-8) return fail(std::string(s) + " zero height at wandering " + x.to_string());
      zeros += pre;
    }
  }
  return {true, "defect " + std::to_string(worst) + ", " + std::to_string(zeros) + " preperiodic box points"};
}

Outcome product_formula() {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const mpq_class x = random_rational(rng, 1'000'000, true);
    const auto r = product_formula_check(x);
    if (!r.exact_zero) return fail("library check failed for " + x.get_str());
    // Trial-division factorisation of numerator and denominator.
    std::map<long, long> ord;
    for (auto [v, sign] : {std::pair<mpz_class, long>{abs(x.get_num()), 1}, {x.get_den(), -1}}) {
      long n = v.get_si();
      for (long p = 2; p * p <= n; ++p)
        while (n % p == 0) {
          ord[p] += sign;
          n /= p;
        }
      if (n > 1) ord[n] += sign;
    }
    mpq_class prod = 1;
    for (const auto& t : r.terms) {
      if (t.place.archimedean) continue;
      const long p = t.place.p.get_si();
      if (ord[p] != t.ord) return fail("ord mismatch at " + std::to_string(p) + " for " + x.get_str());
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), t.place.p.get_mpz_t(), static_cast<unsigned long>(std::labs(t.ord)));
      prod *= t.ord >= 0 ? mpq_class(pw) : mpq_class(1, pw);
    }
    for (const auto& [p, e] : ord)
      if (e != 0) {
        bool listed = false;
        for (const auto& t : r.terms) listed = listed || (!t.place.archimedean && t.place.p == p);
        if (!listed) return fail("missing prime " + std::to_string(p));
      }
    if (prod != abs(x)) return fail("product mismatch for " + x.get_str());
  }
  return {true, "1000 rationals"};
}

Outcome curve_transfer() {
  struct Case {
    const char* curve;
    const char* f;
    const char* g;
  };
  const std::vector<Case> cases{{"y - x", "x^2 - 1", "x^2 - 1"},
                                {"y = x^2 - 1", "x^2 - 1", "x^2 - 1"},
                                {"y - x", "(x^2 + 1)/(2x)", "(x^2 + 1)/(2x)"},
                                {"x + y", "x^3 + 1", "x^3 - 1"}};
  std::string detail;
  for (const auto& c : cases) {
    const RationalMap f = M(c.f), g = M(c.g);
    const BiCurve C = parse_curve(c.curve);
    if (!is_invariant(C, {f, g, 1, 1})) return fail(std::string(c.curve) + " not invariant");
    const auto r = preperiodic_pairs_on_curve(C, f, g);
    if (!r.transfer_failures.empty()) return fail(std::string(c.curve) + " transfer failure");
    if (r.pairs.empty()) return fail(std::string(c.curve) + " no pairs");
    for (const auto& [x, y] : r.pairs)
      if (!brute_preperiodic(g, y)) return fail(std::string(c.curve) + " wandering y " + y.to_string());
    detail += std::to_string(r.pairs.size()) + " ";
  }
  return {true, "pairs per curve: " + detail};
}

Outcome pullback_measures() {
  const ComplexMap f(M("x^3 + 1")), g(M("x^3 - 1"));
  auto disc = [&](const char* curve) {
    const BiCurve C = parse_curve(curve);
    return measure_discrepancy(curve_pullback_measure(C, f, 1, 10000, 0), curve_pullback_measure(C, g, 2, 10000, 1));
  };
  const double inv = disc("x + y"), ctl = disc("x - y");
  const std::string detail = "invariant " + std::to_string(inv) + ", control " + std::to_string(ctl);
  if (inv >= 0.05 || ctl <= 0.15) return fail(detail);
  return {true, detail};
}

Outcome poincare_germ() {
  const auto s = poincare_series(ComplexMap(M("x^2")), 1.0, 10);
  double factorial = 1, worst = 0;
  for (int k = 1; k <= 10; ++k) {
    factorial *= k;
    worst = std::max(worst, std::abs(s.coeffs[static_cast<std::size_t>(k - 1)] - 1.0 / factorial));
  }
  if (worst > 1e-10) return fail("coefficient error " + std::to_string(worst));
  const double res = germ_equality_residual(ComplexMap(M("x^2")), ComplexMap(M("x^4")), 2, 1, {1.0, 1.0}, 1.0, 0.1);
  if (!(res < 1e-12)) return fail("germ residual " + std::to_string(res));
  char buf[96];
  std::snprintf(buf, sizeof buf, "coefficient error %.2e, germ residual %.2e", worst, res);
  return {true, buf};
}

Outcome curve_orbits() {
  const RationalMap f = M("x^2 - 1");
  for (const char* c : {"y - x", "y = x^2 - 1"}) {
    const auto r = curve_preperiodicity(C(c), {f, f, 1, 1}, 3, 200);
    if (r.preperiod != 0 || r.period != 1) return fail(std::string(c) + " not certified fixed");
  }
  // The diagonal (t, t) goes to (t^(2^k), t^(3^k)), i.e. x^(3^k) = y^(2^k).
  const int steps = 4;
  const auto r = curve_preperiodicity(C("y - x"), {M("x^2"), M("x^3"), 1, 1}, steps, 1000);
  if (r.decided()) return fail("(x^2, x^3) diagonal reported a repeat");
  if (static_cast<int>(r.bidegrees.size()) != steps + 1) return fail("wrong number of images");
  long a = 1, b = 1;
  for (int k = 0; k <= steps; ++k, a *= 3, b *= 2) {
    if (r.bidegrees[static_cast<std::size_t>(k)] != std::make_pair(static_cast<int>(a), static_cast<int>(b)))
      return fail("bidegree mismatch at step " + std::to_string(k));
    const BiCurve predicted = C("x^" + std::to_string(a) + " - y^" + std::to_string(b));
    if (r.keys[static_cast<std::size_t>(k)] != predicted.key()) return fail("curve mismatch at step " + std::to_string(k));
  }
  return {true, "bidegrees (3^k, 2^k) for k <= 4"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double seconds_limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "unicritical pairing grid", 5, pairing_grid},
      {2, "semiconjugacy round trip", 60, semiconjugacy_roundtrip},
      {3, "decomposition oracle", 0, engstrom_oracle},
      {4, "gap preserved under iteration", 0, gap_preservation},
      {5, "canonical height functional equation", 30, height_equation},
      {6, "product formula", 0, product_formula},
      {7, "preperiodic transfer on invariant curves", 60, curve_transfer},
      {8, "pullback measures", 120, pullback_measures},
      {9, "Poincare germ", 0, poincare_germ},
      {10, "curve orbits", 0, curve_orbits},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.passed && c.seconds_limit > 0 && secs >= c.seconds_limit) o = fail("over time limit; " + o.detail);
    failures += !o.passed;
    std::printf("%s criterion %d (%s): %s [%.2fs]\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
