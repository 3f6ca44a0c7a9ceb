#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "splitdyn/errors.hpp"
#include "splitdyn/heights.hpp"

using namespace splitdyn;
using namespace testing_helpers;

namespace {

// Laplace expansion; fine for the 4x4 and 6x6 matrices used here.
mpz_class slow_det(const std::vector<std::vector<mpz_class>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  mpz_class acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    acc += (j % 2 ? -1 : 1) * m[0][j] * slow_det(minor);
  }
  return acc;
}

// Sylvester matrix of two binary forms of degree d (coefficient i at X^i Y^(d-i)).
mpz_class sylvester(const ZPoly& F, const ZPoly& G, int d) {
  const int n = 2 * d;
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n, 0));
  for (int r = 0; r < d; ++r)
    for (int i = 0; i <= d; ++i) {
      m[r][r + d - i] = F.coeff(i);
      m[r + d][r + d - i] = G.coeff(i);
    }
  return slow_det(m);
}

// h(f^n(x)) / d^n from the exact orbit.
double height_by_definition(const RationalMap& f, ProjPointQ x, int n) {
  for (int k = 0; k < n; ++k) x = f(x);
  return naive_height(x) / std::pow(f.degree(), n);
}

}  // namespace

TEST(ZPoly, ResultantAgainstSylvester) {
  for (const char* s : {"x^2 - 1", "(x^2 + 1)/(2x)", "(3x^2 - 1)/(x^2 + 2)", "x^3 - 2x + 5"}) {
    const RationalMap f = M(s);
    EXPECT_EQ(abs(f.resultant()), abs(sylvester(f.F0(), f.F1(), f.degree()))) << s;
  }
  EXPECT_EQ(abs(M("(x^2 + 1)/(2x)").resultant()), 4);
}

TEST(ZPoly, RationalRootsAndGcd) {
  const ZPoly p({-6, 1, 3, 2});  // 2x^3 + 3x^2 + x - 6
  for (const auto& r : rational_roots(p)) {
    mpq_class acc = 0;
    for (int i = p.degree(); i >= 0; --i) acc = acc * r + p.coeff(i);
    EXPECT_EQ(acc, 0);
  }
  const auto roots = rational_roots(ZPoly({0, 0, -4, 0, 1}));  // x^2 (x^2 - 4)
  EXPECT_EQ(roots.size(), 3u);
  EXPECT_EQ(gcd(ZPoly({-1, 0, 1}), ZPoly({1, 2, 1})), ZPoly({1, 1}));
}

TEST(ZPoly, BivariateInterpolationRoundTrip) {
  const BPoly a = C("x^3*y^2 - 7x*y + 2y^2 - 5").defining();
  const auto nodes_x = interpolation_nodes(a.deg_x() + 1);
  const auto nodes_y = interpolation_nodes(a.deg_y() + 1);
  std::vector<std::vector<mpz_class>> values(nodes_x.size(), std::vector<mpz_class>(nodes_y.size()));
  for (std::size_t i = 0; i < nodes_x.size(); ++i)
    for (std::size_t j = 0; j < nodes_y.size(); ++j) values[i][j] = eval(a, nodes_x[i], nodes_y[j]);
  EXPECT_EQ(interpolate_grid(values, a.deg_x(), a.deg_y()), a);
}

TEST(Heights, NaiveHeightAndProductFormula) {
  EXPECT_DOUBLE_EQ(naive_height(pt("2")), std::log(2.0));
  EXPECT_DOUBLE_EQ(naive_height(pt("1")), 0.0);
  EXPECT_DOUBLE_EQ(naive_height(pt("3/7")), std::log(7.0));
  const auto six = product_formula_check(6);
  EXPECT_TRUE(six.exact_zero);
  EXPECT_NEAR(six.float_sum, 0, 1e-12);
  ASSERT_EQ(six.terms.size(), 3u);
  EXPECT_NEAR(six.terms[0].log_abs, std::log(6.0), 1e-12);
  const auto one = product_formula_check(1);
  EXPECT_TRUE(one.exact_zero);
  for (const auto& t : one.terms) EXPECT_EQ(t.log_abs, 0.0);
  const auto r = product_formula_check(mpq_class(-4, 9));
  EXPECT_TRUE(r.exact_zero);
  for (const auto& t : r.terms) {
    if (t.place.archimedean) EXPECT_NEAR(t.log_abs, std::log(4.0 / 9), 1e-12);
    else if (t.place.p == 2) EXPECT_EQ(t.ord, 2);
    else if (t.place.p == 3) EXPECT_EQ(t.ord, -2);
  }
  EXPECT_THROW(product_formula_check(0), Error);
}

TEST(Heights, LocalHeights) {
  EXPECT_NEAR(local_canonical_height(M("x^2"), pt("2"), Place::infinity(), 1e-10), std::log(2.0), 1e-10);
  EXPECT_NEAR(local_canonical_height(M("x^2 - 1"), pt("0"), Place::infinity(), 1e-10), 0, 1e-10);
  // Good reduction at 5 and a 5-adic unit: the local height vanishes.
  EXPECT_NEAR(local_canonical_height(M("x^2 - 1"), pt("3"), Place::prime(5), 1e-10), 0, 1e-10);
  // At a bad prime the local part is genuinely nonzero for some points.
  const RationalMap f = M("(x^2 + 1)/(2x)");
  const auto places = relevant_places(f);
  EXPECT_EQ(places.size(), 2u);
}

TEST(Heights, CanonicalHeightExamples) {
  const auto h2 = canonical_height(M("x^2"), pt("2"), 1e-10);
  EXPECT_NEAR(h2.value, std::log(2.0), 1e-10);
  EXPECT_NEAR(canonical_height(M("x^2 - 1"), pt("0"), 1e-10).value, 0, 1e-10);
  const RationalMap f = M("x^2 - 1");
  const auto h = canonical_height(f, pt("1/2"), 1e-10);
  EXPECT_GT(h.value, 0);
  const auto hf = canonical_height(f, f(pt("1/2")), 1e-10);
  EXPECT_NEAR(hf.value, 2 * h.value, 2e-10 + hf.error_radius + 2 * h.error_radius);
}

TEST(Heights, MatchesDefinitionByExactOrbit) {
  for (const char* s : {"x^2 - 1", "(x^2 + 1)/(2x)", "x^2 + 1/4", "(x^2 - 2)/(3x)", "x^3 - 2x"}) {
    const RationalMap f = M(s);
    const double C = height_constants(f).total();
    for (const char* x : {"1/2", "3", "-5/3", "7/2"}) {
      const int n = f.degree() == 2 ? 12 : 8;
      const double slack = C / (f.degree() - 1) / std::pow(f.degree(), n) + 1e-9;
      EXPECT_NEAR(canonical_height(f, pt(x), 1e-10).value, height_by_definition(f, pt(x), n), slack) << s << " at " << x;
    }
  }
}

TEST(Heights, ConjugationInvariance) {
  const RationalMap f = M("x^2 - 1");
  // f' = L^-1 f L with L = 2x + 1.
  const RationalMap fp = M("((2x + 1)^2 - 2)/2");
  for (const char* x : {"1/3", "2", "-3/5"}) {
    const ProjPointQ p = pt(x);
    const ProjPointQ Lp(2 * p.affine() + 1);
    EXPECT_NEAR(canonical_height(fp, p, 1e-10).value, canonical_height(f, Lp, 1e-10).value, 2e-10);
  }
}

TEST(Heights, PreperiodicityDecisions) {
  const auto d = is_preperiodic(M("x^2 - 1"), pt("0"));
  EXPECT_TRUE(d.preperiodic);
  EXPECT_EQ(d.tail, 0);
  EXPECT_EQ(d.period, 2);
  const auto inf = is_preperiodic(M("x^2"), ProjPointQ::infinity());
  EXPECT_TRUE(inf.preperiodic);
  EXPECT_EQ(inf.period, 1);
  const auto w = is_preperiodic(M("x^2 + 1"), pt("1/2"));
  EXPECT_FALSE(w.preperiodic);
  EXPECT_GT(naive_height(w.orbit.back()), w.escape_bound);
  const auto tail = is_preperiodic(M("x^2 - 1"), pt("1"));
  EXPECT_TRUE(tail.preperiodic);
  EXPECT_EQ(tail.tail, 1);
}

TEST(Heights, PreperiodicEnumerationAgainstBruteForce) {
  auto names = [](const PreperiodicEnumeration& e) {
    std::set<std::string> s;
    for (const auto& p : e.points) s.insert(p.to_string());
    return s;
  };
  EXPECT_EQ(names(preperiodic_points(M("x^2"), 0)), (std::set<std::string>{"-1", "0", "1", "inf"}));
  const auto e = names(preperiodic_points(M("x^2 - 1"), 0));
  for (const char* p : {"0", "-1", "1", "inf"}) EXPECT_TRUE(e.count(p));
  EXPECT_EQ(names(preperiodic_points(M("x^2 + 1"), 0)), (std::set<std::string>{"inf"}));
  // x^2 - 3/4 has the rational fixed points 3/2 and -1/2.
  const auto f = M("x^2 - 3/4");
  const auto en = preperiodic_points(f, 0);
  const auto s = names(en);
  EXPECT_TRUE(s.count("3/2") && s.count("-1/2") && s.count("1/2") && s.count("-3/2"));
  // Brute force over the searched box with direct orbits.
  for (long b = 1; b <= 6; ++b)
    for (long a = -12; a <= 12; ++a) {
      const ProjPointQ x{mpz_class(a), mpz_class(b)};
      if (naive_height(x) > en.searched_bound) continue;
      std::set<std::string> seen;
      ProjPointQ y = x;
      bool pre = false;
      for (int k = 0; k < 64 && naive_height(y) < 50; ++k) {
        if (!seen.insert(y.to_string()).second) {
          pre = true;
          break;
        }
        y = f(y);
      }
      EXPECT_EQ(pre, s.count(x.to_string()) == 1) << x.to_string();
    }
  EXPECT_TRUE(preperiodic_points(f, 0).warning.has_value());
}

TEST(Heights, DecisionConsistency) {
  std::mt19937_64 rng(23);
  for (const char* s : {"x^2 - 1", "(x^2 + 1)/(2x)", "x^2 - 3/4"}) {
    const RationalMap f = M(s);
    for (const auto& x : preperiodic_points(f, 0).points) {
      EXPECT_TRUE(is_preperiodic(f, x).preperiodic);
      EXPECT_LE(canonical_height(f, x, 1e-6).value, 1e-5);
    }
    for (int k = 0; k < 20; ++k) {
      const ProjPointQ x(random_rational(rng, 30));
      const bool pre = is_preperiodic(f, x).preperiodic;
      const auto h = canonical_height(f, x, 1e-6);
      EXPECT_EQ(pre, h.value <= 1e-5) << s << " " << x.to_string();
      EXPECT_GE(h.value, -h.error_radius);
    }
  }
}

TEST(Heights, BudgetedEnumeration) {
  const RationalMap f = M("(x^2 - 2)/(3x)");
  EXPECT_THROW(preperiodic_points(f, 0, 10), ResourceLimit);
  const auto t = preperiodic_points(f, 0, 10, true);
  EXPECT_TRUE(t.truncated);
}
