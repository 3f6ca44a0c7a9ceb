#include <gtest/gtest.h>

#include "helpers.hpp"
#include "splitdyn/classify.hpp"
#include "splitdyn/errors.hpp"

using namespace splitdyn;
using namespace testing_helpers;

namespace {

UnicriticalMap U(int d, const char* c) { return UnicriticalMap(d, Q(c)); }
LinearPoly Lin(const char* a, const char* b) { return LinearPoly(Q(a), Q(b)); }

}  // namespace

TEST(Classify, FDelta) {
  EXPECT_EQ(f_delta(U(4, "3"), 2), P("(x^2 + 3)^2"));
  EXPECT_EQ(f_delta(U(5, "-2"), 5), P("x^5 - 2"));
  EXPECT_EQ(f_delta(U(2, "1"), 1), P("(x + 1)^2"));
  EXPECT_THROW(f_delta(U(4, "1"), 3), PreconditionViolated);
}

TEST(Classify, IntertwiningIdentity) {
  // (x^delta + c) after f_delta equals f after (x^delta + c).
  std::mt19937_64 rng(41);
  for (int d = 2; d <= 8; ++d)
    for (int delta = 1; delta <= d; ++delta) {
      if (d % delta) continue;
      const UnicriticalMap u(d, FieldElement(Field::rationals(), random_rational(rng, 5, true)));
      const Poly h = Poly::monomial(FieldElement::one(u.c.field()), delta) + Poly::constant(u.c);
      EXPECT_EQ(compose(h, f_delta(u, delta)), compose(u.poly(), h)) << d << " " << delta;
    }
}

TEST(Classify, IntertwineExamples) {
  EXPECT_TRUE(intertwine_check(U(2, "-1"), 1, {0, 2, LinearPoly::identity(Field::rationals())}));
  // A = x - 1, B = (x - 1)^2: f(A) = (x - 1)^2 - 1 and A(B) = (x - 1)^2 - 1.
  const auto [A, B] = generate_semiconjugacy(U(2, "-1"), 1, 0, 1, LinearPoly::identity(Field::rationals()));
  EXPECT_EQ(A, P("x - 1"));
  EXPECT_EQ(B, P("(x - 1)^2"));
  EXPECT_EQ(compose(P("x^2 - 1"), A), compose(A, B));
  EXPECT_TRUE(intertwine_check(U(4, "1"), 1, {1, 2, Lin("2", "3")}));
}

TEST(Classify, GenerateExamples) {
  const auto u = U(3, "2");
  const auto id = LinearPoly::identity(Field::rationals());
  const auto [A, B] = generate_semiconjugacy(u, 1, 0, 3, id);
  EXPECT_EQ(A, u.poly());
  EXPECT_EQ(B, u.poly());
  const auto [A1, B1] = generate_semiconjugacy(u, 1, 0, 1, id);
  EXPECT_EQ(A1, P("x + 2"));
  EXPECT_EQ(B1, f_delta(u, 1));
  const auto u4 = U(4, "2");
  const auto [A2, B2] = generate_semiconjugacy(u4, 2, 1, 2, Lin("1", "-1"));
  EXPECT_EQ(compose(iterate(u4.poly(), 2), A2), compose(A2, B2));
}

TEST(Classify, ClassifyExamples) {
  const auto u = U(2, "-1");
  const auto s = classify_semiconjugacy(u, 1, P("x^2 - 1"), P("x^2 - 1"));
  EXPECT_EQ(s.m, 0);
  EXPECT_EQ(s.delta, 2);
  EXPECT_EQ(s.L, LinearPoly::identity(Field::rationals()));

  const auto u4 = U(4, "1");
  const auto [A, B] = generate_semiconjugacy(u4, 1, 1, 2, Lin("3", "1"));
  const SemiconjugacySolution expect{1, 2, Lin("3", "1")};
  EXPECT_EQ(classify_semiconjugacy(u4, 1, A, B), expect);

  // Linear A: (x + c) after L = A, so L = A - c.
  const auto u3 = U(3, "2");
  const Poly A3 = P("x + 5");
  const Poly B3 = conjugate(f_delta(u3, 1), Lin("1", "3"));
  const auto s3 = classify_semiconjugacy(u3, 1, A3, B3);
  EXPECT_EQ(s3.m, 0);
  EXPECT_EQ(s3.delta, 1);
  EXPECT_EQ(s3.L, Lin("1", "3"));

  EXPECT_THROW(classify_semiconjugacy(u, 1, P("x^2"), P("x^2")), NotASolution);
}

TEST(Classify, CanonicalSolution) {
  const auto u = U(3, "2");
  const SemiconjugacySolution s{1, 1, Lin("2", "0")};
  const auto c = canonical_solution(u, s);
  EXPECT_EQ(c.m, 0);
  EXPECT_EQ(c.delta, 3);
  EXPECT_EQ(c.L, Lin("2", "2"));
  // Both describe the same A.
  EXPECT_EQ(generate_semiconjugacy(u, 1, s.m, s.delta, s.L).first, generate_semiconjugacy(u, 1, c.m, c.delta, c.L).first);
}

TEST(Classify, RoundTripSmall) {
  std::mt19937_64 rng(43);
  const std::vector<int> ds{2, 3, 4, 6};
  int done = 0;
  while (done < 30) {
    const int d = ds[rng() % ds.size()];
    const int n = 1 + static_cast<int>(rng() % 2), m = static_cast<int>(rng() % 3);
    std::vector<int> divs;
    for (int k = 1; k <= d; ++k)
      if (d % k == 0) divs.push_back(k);
    const int delta = divs[rng() % divs.size()];
    long deg = delta;
    for (int k = 0; k < m + n; ++k) deg *= d;
    if (deg > 256) continue;
    const UnicriticalMap u(d, FieldElement(Field::rationals(), random_rational(rng, 3, true)));
    if (u.is_exceptional()) continue;
    const LinearPoly L(FieldElement(Field::rationals(), random_rational(rng, 3, true)),
                       FieldElement(Field::rationals(), random_rational(rng, 3)));
    const SemiconjugacySolution sol{m, delta, L};
    const auto [A, B] = generate_semiconjugacy(u, n, m, delta, L);
    EXPECT_EQ(compose(iterate(u.poly(), n), A), compose(A, B));
    EXPECT_EQ(classify_semiconjugacy(u, n, A, B), canonical_solution(u, sol));
    ++done;
  }
}

TEST(Classify, PairingExamples) {
  const auto v = classify_unicritical_pair(U(3, "1"), U(3, "-1"));
  EXPECT_EQ(v.kind, PairingVerdict::Kind::Paired);
  ASSERT_TRUE(v.zeta);
  EXPECT_EQ(*v.zeta, Q("-1"));
  EXPECT_EQ(classify_unicritical_pair(U(2, "1"), U(2, "-1")).kind, PairingVerdict::Kind::NotPaired);
  EXPECT_EQ(classify_unicritical_pair(U(2, "0"), U(2, "1")).kind, PairingVerdict::Kind::ExceptionalInput);
  EXPECT_EQ(classify_unicritical_pair(U(2, "-2"), U(2, "1")).kind, PairingVerdict::Kind::ExceptionalInput);
  EXPECT_EQ(classify_unicritical_pair(U(2, "1"), U(3, "1")).kind, PairingVerdict::Kind::NotPaired);
  // Over Q(i), x^5 + 1 and x^5 + i are paired by zeta = i.
  const auto K = Field::extension({1, 0, 1});
  const auto i = FieldElement::generator(K);
  const auto w = classify_unicritical_pair(UnicriticalMap(5, FieldElement::one(K)), UnicriticalMap(5, i));
  EXPECT_EQ(w.kind, PairingVerdict::Kind::Paired);
  EXPECT_THROW(classify_unicritical_pair(UnicriticalMap(5, i), U(5, "1")), FieldMismatch);
}

TEST(Classify, PairingMatchesConjugacyWitness) {
  const std::vector<const char*> cs{"-3", "-1", "-1/2", "1/2", "1", "2"};
  for (int d = 2; d <= 5; ++d)
    for (const char* a : cs)
      for (const char* b : cs) {
        const auto v = classify_unicritical_pair(U(d, a), U(d, b));
        const auto z = normal_conjugacy_witness(U(d, a).poly(), U(d, b).poly());
        EXPECT_EQ(v.kind == PairingVerdict::Kind::Paired, z.has_value()) << d << " " << a << " " << b;
        if (z) {
          const Poly zx = Poly::monomial(*z, 1);
          EXPECT_EQ(z->inverse() * compose(U(d, a).poly(), zx), U(d, b).poly());
        }
      }
}

TEST(Classify, Symmetries) {
  const auto s = symmetries_of(P("(x^2 + 1)^2"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1], Lin("-1", "0"));
  // x^2 + 3x is symmetric about -3/2.
  const auto u = symmetries_of(P("x^2 + 3x"));
  ASSERT_EQ(u.size(), 2u);
  EXPECT_EQ(u[1], Lin("-1", "-3"));
  EXPECT_EQ(symmetries_of(P("x^3 + 4")).size(), 1u);
  // Shifted centre: g(x) = (x - 1)^2 has x -> 2 - x.
  const auto t = symmetries_of(P("(x - 1)^2"));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1], Lin("-1", "2"));
  // A group: closed under composition and inverses.
  const auto K = Field::extension({1, 0, 1});
  const auto g = symmetries_of(P("x^4 + 2", K));
  EXPECT_EQ(g.size(), 4u);
  for (const auto& a : g) {
    bool inverse_found = false;
    for (const auto& b : g) {
      bool closed = false;
      for (const auto& c : g) closed = closed || a.after(b) == c;
      EXPECT_TRUE(closed);
      inverse_found = inverse_found || a.after(b) == LinearPoly::identity(K);
    }
    EXPECT_TRUE(inverse_found);
  }
}

TEST(Classify, IterateDetection) {
  const Poly f = P("x^2 + 1");
  EXPECT_EQ(is_iterate_of(iterate(f, 2), f, 5), 2);
  EXPECT_FALSE(is_iterate_of(iterate(f, 2) + P("1"), f, 5));
  EXPECT_EQ(is_iterate_of(P("x"), f, 5), 0);
}

TEST(Classify, GapData) {
  const auto a = gap_data(P("x^3 + x"));
  EXPECT_EQ(a.D, 3);
  EXPECT_EQ(a.m, 2);
  EXPECT_EQ(a.eta, 2);
  const auto b = gap_data(P("(x^2 + 7)^2"));
  EXPECT_EQ(b.D, 4);
  EXPECT_EQ(b.m, 2);
  EXPECT_EQ(b.eta, 2);
  const auto c = gap_data(P("x^5"));
  EXPECT_EQ(c.D, 5);
  EXPECT_FALSE(c.m);
  EXPECT_EQ(c.eta, 5);
}

TEST(Classify, GapPreservedUnderIteration) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 40; ++k) {
    const int D = 2 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(D - 1));
    std::vector<mpq_class> c(static_cast<std::size_t>(D + 1), 0);
    c[D] = random_rational(rng, 4, true);
    c[D - m] = random_rational(rng, 4, true);
    for (int i = 0; i < D - m; ++i) c[i] = random_rational(rng, 4);
    const Poly p = Poly::from_rationals(Field::rationals(), c);
    const int n = 1 + static_cast<int>(rng() % 3);
    const Poly it = iterate(p, n);
    // Direct coefficient check: nothing between D^n - m and D^n.
    for (int i = it.degree() - m + 1; i < it.degree(); ++i) EXPECT_TRUE(it.coeff(i).is_zero());
    EXPECT_FALSE(it.coeff(it.degree() - m).is_zero());
    EXPECT_EQ(gap_data(it).m, m);
  }
}
