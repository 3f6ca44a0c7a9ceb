#include <gtest/gtest.h>

#include "helpers.hpp"
#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"
#include "splitdyn/poly.hpp"

using namespace splitdyn;
using namespace testing_helpers;

TEST(Arith, FactorsAndValuations) {
  const auto f = factor_integer(mpz_class(360));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], std::make_pair(mpz_class(2), 3));
  EXPECT_EQ(f[2], std::make_pair(mpz_class(5), 1));
  // 2^61 - 1 is prime, times a small cofactor.
  const mpz_class big = mpz_class("2305843009213693951") * 1009;
  const auto g = factor_integer(big);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1].first, mpz_class("2305843009213693951"));
  EXPECT_EQ(valuation(mpz_class(48), 2), 4);
  EXPECT_EQ(divisors(mpz_class(-12)).size(), 6u);
  EXPECT_EQ(exact_root(mpz_class(-27), 3), mpz_class(-3));
  EXPECT_FALSE(exact_root(mpz_class(-4), 2));
  EXPECT_EQ(rational_root(mpq_class(4, 9), 2), mpq_class(2, 3));
  EXPECT_NEAR(log_abs(mpz_class(1) << 2000), 2000 * std::log(2.0), 1e-9);
  EXPECT_EQ(parse_rational("-6/4"), mpq_class(-3, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
}

TEST(Field, ExtensionArithmetic) {
  const auto K = Field::extension({1, 0, 1});  // t^2 + 1
  const auto i = FieldElement::generator(K);
  EXPECT_EQ(i * i, FieldElement(K, -1));
  EXPECT_EQ(i.inverse(), -i);
  EXPECT_EQ(i.pow(-3), i);
  EXPECT_EQ(roots_of_unity(K).size(), 4u);
  EXPECT_EQ(roots_of_unity(Field::rationals(), 3).size(), 1u);
  EXPECT_EQ(roots_of_unity(Field::rationals(), 2).size(), 2u);
  EXPECT_THROW((void)(i + FieldElement(Field::rationals(), 1)), FieldMismatch);
  // Two declarations of the same modulus are different fields.
  const auto K2 = Field::extension({1, 0, 1});
  EXPECT_FALSE(FieldElement::one(K) == FieldElement::one(K2));
  EXPECT_THROW(Field::extension({-1, 0, 1}), Error);  // reducible
  EXPECT_THROW((void)FieldElement(Field::rationals(), 0).inverse(), DivisionByZero);
}

TEST(Field, NthRoot) {
  EXPECT_EQ(nth_root(Q("8/27"), 3), Q("2/3"));
  EXPECT_FALSE(nth_root(Q("2"), 2));
  const auto K = Field::extension({-2, 0, 1});  // t^2 - 2
  const auto r = nth_root(FieldElement(K, 2), 2);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->pow(2), FieldElement(K, 2));
}

TEST(Poly, ComposeExamples) {
  EXPECT_EQ(compose(P("x^2"), P("x + 1")), P("x^2 + 2x + 1"));
  const Poly p = P("3x^3 - x + 1/2");
  EXPECT_EQ(compose(p, P("x")), p);
  // (x^2 + c)^2 after x^3: expand the right-hand side independently.
  const Poly lhs = compose(P("(x^2 + 5)^2"), P("x^3"));
  EXPECT_EQ(lhs, P("x^12 + 10x^6 + 25"));
}

TEST(Poly, IterateExamples) {
  EXPECT_EQ(iterate(P("x^2 - 1"), 2), P("x^4 - 2x^2"));
  EXPECT_EQ(iterate(P("x^2 + 7"), 0), P("x"));
  EXPECT_EQ(iterate(P("x^2"), 3), P("x^8"));
}

TEST(Poly, BudgetIsEnforced) {
  Budget tiny{64};
  EXPECT_THROW(iterate(P("x^2 + 1/3"), 8, tiny), ResourceLimit);
}

TEST(Poly, ChebyshevIdentity) {
  EXPECT_EQ(chebyshev(1, Field::rationals()), P("x"));
  EXPECT_EQ(chebyshev(2, Field::rationals()), P("x^2 - 2"));
  EXPECT_EQ(chebyshev(3, Field::rationals()), P("x^3 - 3x"));
  // T_d(z + 1/z) z^d = z^(2d) + 1: sum_i T_d[i] (z^2 + 1)^i z^(d - i).
  for (int d = 1; d <= 12; ++d) {
    const Poly T = chebyshev(d, Field::rationals());
    Poly acc(Field::rationals());
    for (int i = 0; i <= d; ++i) acc = acc + T.coeff(i) * (pow(P("x^2 + 1"), i) * pow(P("x"), d - i));
    EXPECT_EQ(acc, pow(P("x"), 2 * d) + P("1")) << d;
  }
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      const auto F = Field::rationals();
      EXPECT_EQ(compose(chebyshev(m, F), chebyshev(n, F)), chebyshev(m * n, F));
    }
}

TEST(Poly, ConjugateIsAGroupAction) {
  const LinearPoly L(Q("1"), Q("1"));
  EXPECT_EQ(conjugate(P("x^2"), L), P("x^2 + 2x"));
  EXPECT_EQ(conjugate(P("x^3 + 2"), LinearPoly::identity(Field::rationals())), P("x^3 + 2"));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Poly p = random_poly(rng, 3, 5);
    const LinearPoly L1(FieldElement(Field::rationals(), random_rational(rng, 4, true)),
                        FieldElement(Field::rationals(), random_rational(rng, 4)));
    const LinearPoly L2(FieldElement(Field::rationals(), random_rational(rng, 4, true)),
                        FieldElement(Field::rationals(), random_rational(rng, 4)));
    EXPECT_EQ(conjugate(p, L1.after(L2)), conjugate(conjugate(p, L1), L2));
    EXPECT_EQ(conjugate(conjugate(p, L1), L1.inverse()), p);
  }
}

TEST(Poly, ComposeAssociativeAndIterateAdditive) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const Poly a = random_poly(rng, 2, 4), b = random_poly(rng, 2, 4), c = random_poly(rng, 2, 4);
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
    const int m = static_cast<int>(rng() % 3), n = static_cast<int>(rng() % 3);
    EXPECT_EQ(iterate(a, m + n), compose(iterate(a, m), iterate(a, n)));
  }
}

TEST(Poly, NormalForm) {
  // x^2 + 2x + 3 = (x + 1)^2 + 2; conjugating by L = x - 1 gives x^2 + 3.
  const auto [q, L] = normal_form(P("x^2 + 2x + 3"));
  EXPECT_EQ(conjugate(q, L.inverse()), P("x^2 + 2x + 3"));
  EXPECT_EQ(q, P("x^2 + 3"));
  EXPECT_TRUE(q.is_monic());
  EXPECT_TRUE(q.coeff(1).is_zero());
  const auto [q2, L2] = normal_form(P("x^3 + 5"));
  EXPECT_EQ(q2, P("x^3 + 5"));
  EXPECT_EQ(L2, LinearPoly::identity(Field::rationals()));
  const auto [q3, L3] = normal_form(P("4x^2 + 1"));
  EXPECT_EQ(conjugate(q3, L3.inverse()), P("4x^2 + 1"));
  EXPECT_TRUE(q3.is_monic());
  // Needs sqrt(2) for the scaling.
  EXPECT_THROW(normal_form(P("2x^3 + 1")), RootNotInField);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const Poly p = random_poly(rng, 2 + static_cast<int>(rng() % 3), 6);
    try {
      const auto [qq, LL] = normal_form(p);
      EXPECT_EQ(conjugate(qq, LL.inverse()), p);
    } catch (const RootNotInField&) {
    }
  }
}

TEST(Poly, NormalConjugacyWitness) {
  const auto z = normal_conjugacy_witness(P("x^3 + 1"), P("x^3 - 1"));
  ASSERT_TRUE(z);
  EXPECT_EQ(*z, Q("-1"));
  // q(x) = z^-1 p(z x) checked by substitution.
  EXPECT_EQ(z->inverse() * compose(P("x^3 + 1"), P("-x")), P("x^3 - 1"));
  EXPECT_EQ(normal_conjugacy_witness(P("x^4 + 2"), P("x^4 + 2")), Q("1"));
  EXPECT_FALSE(normal_conjugacy_witness(P("x^2 + 1"), P("x^2 - 1")));
}

TEST(Poly, Exceptional) {
  EXPECT_EQ(is_exceptional_poly(P("x^2 - 2")), Exceptional::PlusChebyshev);
  EXPECT_EQ(is_exceptional_poly(P("x^3")), Exceptional::Monomial);
  EXPECT_EQ(is_exceptional_poly(P("x^2 + 1")), Exceptional::No);
  EXPECT_EQ(is_exceptional_poly(P("x^3 - 3x")), Exceptional::PlusChebyshev);
  EXPECT_EQ(is_exceptional_poly(P("-x^3 + 3x")), Exceptional::MinusChebyshev);
  // Conjugates are detected too.
  const LinearPoly L(Q("2"), Q("-3"));
  EXPECT_EQ(is_exceptional_poly(conjugate(P("x^4"), L)), Exceptional::Monomial);
  EXPECT_EQ(is_exceptional_poly(conjugate(chebyshev(5, Field::rationals()), L)), Exceptional::PlusChebyshev);
}

TEST(Poly, EngstromExamples) {
  EXPECT_EQ(engstrom_left(P("x^2"), P("x^2 + 2x + 2"), P("(x^2 + 1)^2"), P("x + 1")), P("x^2 + 1"));
  const Poly p = P("x^3 - x"), q = P("x^2 + 3");
  EXPECT_EQ(engstrom_left(p, q, p, q), P("x"));
  EXPECT_EQ(engstrom_left(P("x^2"), P("x^3"), P("x^6"), P("x")), P("x^3"));
  EXPECT_EQ(engstrom_right(P("x^6"), P("x"), P("x^2"), P("x^3")), P("x^3"));
  EXPECT_EQ(engstrom_right(p, q, p, q), P("x"));
  EXPECT_EQ(engstrom_right(P("(x^2 + 1)^2"), P("x + 1"), P("x^2"), P("x^2 + 2x + 2")), P("x^2 + 1"));
  EXPECT_THROW(engstrom_left(P("x^2"), P("x^2"), P("x^2 + 1"), P("x^2")), Error);
}

TEST(Poly, EngstromRandomOracle) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 40; ++k) {
    const Poly A = random_poly(rng, 2 + static_cast<int>(rng() % 2), 4);
    const Poly Pp = random_poly(rng, 1 + static_cast<int>(rng() % 3), 4);
    const Poly D = random_poly(rng, 1 + static_cast<int>(rng() % 3), 4);
    EXPECT_EQ(engstrom_left(A, compose(Pp, D), compose(A, Pp), D), Pp);
    EXPECT_EQ(engstrom_right(compose(A, Pp), D, A, compose(Pp, D)), Pp);
  }
}

TEST(Poly, GcdAndDivision) {
  const auto [q, r] = divmod(P("x^3 - 1"), P("x - 1"));
  EXPECT_EQ(q, P("x^2 + x + 1"));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(gcd(P("x^2 - 1"), P("2x^2 + 2x")), P("x + 1"));
  EXPECT_EQ(derivative(P("x^3 + x")), P("3x^2 + 1"));
}

TEST(Poly, ExtensionCoefficients) {
  const auto K = Field::extension({1, 0, 1});
  const Poly p = P("x^2 + t", K);
  EXPECT_EQ(p.coeff(0), FieldElement::generator(K));
  EXPECT_THROW((void)(p + P("x")), FieldMismatch);
  // The fourth roots of unity are all visible, so x^4 + 1 has four symmetries.
  EXPECT_EQ(roots_of_unity(K, 4).size(), 4u);
}

TEST(Field, EmbeddingSearch) {
  // Q(sqrt(-3)) contains the cube roots of unity (-1 +- t)/2.
  const auto K = Field::extension({3, 0, 1});
  EXPECT_EQ(roots_of_unity(K).size(), 6u);
  for (const auto& z : roots_of_unity(K)) EXPECT_TRUE(z.pow(6).is_one());
  // Cube roots of 2 in Q(2^(1/3)).
  const auto L = Field::extension({-2, 0, 0, 1});
  const auto r = nth_root(FieldElement(L, 2), 3);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, FieldElement::generator(L));
  // (1 + t)^2 = 3 + 2t in Q(sqrt 2).
  const auto S = Field::extension({-2, 0, 1});
  const auto s = nth_root(FieldElement(S, {mpq_class(3), mpq_class(2)}), 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->pow(2), FieldElement(S, {mpq_class(3), mpq_class(2)}));
  EXPECT_FALSE(nth_root(FieldElement::generator(S), 2));
}

TEST(Poly, LargeProductsAndCompositions) {
  std::mt19937_64 rng(61);
  // Integer products against a schoolbook oracle, across the size threshold.
  for (int len : {3, 12, 40, 200}) {
    std::vector<mpz_class> a(static_cast<std::size_t>(len)), b(static_cast<std::size_t>(len + 7));
    for (auto& v : a) v = mpz_class(static_cast<long>(rng() % 2001) - 1000) * mpz_class("123456789012345678901");
    for (auto& v : b) v = static_cast<long>(rng() % 2001) - 1000;
    a.back() = 1;
    b.back() = -1;
    std::vector<mpz_class> ref(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) ref[i + j] += a[i] * b[j];
    EXPECT_EQ(ZPoly(a) * ZPoly(b), ZPoly(ref)) << len;
  }
  // Compositions checked by exact evaluation at rational points.
  for (int k = 0; k < 6; ++k) {
    const Poly p = random_poly(rng, 10 + static_cast<int>(rng() % 30), 9);
    const Poly q = random_poly(rng, 2 + static_cast<int>(rng() % 4), 9);
    const Poly pq = compose(p, q);
    EXPECT_EQ(pq.degree(), p.degree() * q.degree());
    for (int s = 0; s < 3; ++s) {
      const FieldElement r(Field::rationals(), random_rational(rng, 7));
      EXPECT_EQ(pq(r), p(q(r)));
    }
  }
}
