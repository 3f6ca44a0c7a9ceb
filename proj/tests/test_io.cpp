#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "splitdyn/errors.hpp"

using namespace splitdyn;
using namespace testing_helpers;

TEST(Parser, Examples) {
  EXPECT_EQ(P("x^2 - 1"), P("(x - 1)(x + 1)"));
  EXPECT_EQ(P("2x^3"), P("2*x*x*x"));
  EXPECT_EQ(P("(x^2 - 1)/(x - 1)"), P("x + 1"));
  EXPECT_EQ(P("x/2 + 1/3"), P("(3x + 2)/6"));
  EXPECT_EQ(P("-x^2"), P("0 - x^2"));
  const auto f = parse_map("(x^2 + 1)/(2x)");
  ASSERT_TRUE(std::holds_alternative<RationalMap>(f));
  EXPECT_NE(std::get<RationalMap>(f).resultant(), 0);
  EXPECT_EQ(std::get<RationalMap>(f).degree(), 2);
  EXPECT_EQ(C("x = y"), C("x - y"));
}

TEST(Parser, Errors) {
  EXPECT_THROW(P("x^2 + 1/0"), DivisionByZero);
  try {
    P("x^2 + 1/0");
  } catch (const DivisionByZero& e) {
    EXPECT_EQ(std::string(e.what()), "division by zero at 1:8");
  }
  EXPECT_THROW(P("x^2 + z"), ParseError);
  EXPECT_THROW(P("x^1.5"), ParseError);
  EXPECT_THROW(P("0.5x"), ParseError);
  EXPECT_THROW(P("(x + 1"), ParseError);
  EXPECT_THROW(P("x^1000000"), ResourceLimit);
  EXPECT_THROW(P("1/x"), Error);
  EXPECT_THROW(M("x/x"), Error);
}

TEST(Parser, ExtensionFields) {
  const auto K = parse_field("t^2 + 1");
  const Poly p = P("x^2 + t", K);
  EXPECT_EQ(p.coeff(0) * p.coeff(0), FieldElement(K, -1));
  EXPECT_THROW(parse_map("(x + t)/x", K), FieldMismatch);
  EXPECT_EQ(field_from_json(field_to_json(K))->modulus(), K->modulus());
}

TEST(Parser, RandomRoundTrips) {
  std::mt19937_64 rng(53);
  const auto K = parse_field("t^3 - 2");
  for (int k = 0; k < 500; ++k) {
    const bool ext = k % 5 == 4;
    const FieldPtr F = ext ? K : Field::rationals();
    Poly p = random_poly(rng, static_cast<int>(rng() % 7), 20, F);
    if (ext) p = p + Poly::constant(FieldElement::generator(K) * FieldElement(K, random_rational(rng, 5)));
    EXPECT_EQ(parse_poly(p.to_string(), F), p) << p.to_string();
    // A field read back from JSON is a fresh handle, so compare through text.
    const Poly back = poly_from_json(poly_to_json(p));
    EXPECT_EQ(back.to_string(), p.to_string());
    EXPECT_EQ(back.field()->modulus(), F->modulus());
    if (!ext) EXPECT_EQ(back, p);
  }
}

TEST(Json, MapsAndCurves) {
  const RationalMap f = M("(3x^2 - 1)/(x^2 + 2)");
  const json j = map_to_json(f);
  EXPECT_EQ(j["degree"], 2);
  EXPECT_EQ(M(j["text"].get<std::string>()), f);
  const BiCurve c = C("x^3*y - 2y^2 + 1/3");
  EXPECT_EQ(curve_from_json(curve_to_json(c)), c);
  EXPECT_EQ(complex_point_to_json(ComplexPoint::infinity()), "inf");
}

TEST(Files, MeasureCsvRoundTrip) {
  EmpiricalMeasure m;
  m.x = {ComplexPoint::from({0.25, -1.5}), ComplexPoint::infinity(), ComplexPoint::from({1e-17, 3})};
  m.weights = {0.5, 0.25, 0.25};
  std::stringstream s;
  write_measure_csv(s, m, "{\"note\": 1}");
  EXPECT_EQ(s.str().substr(0, 2), "# ");
  const auto back = read_measure_csv(s);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_TRUE(back.x[1].is_infinity());
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back.weights[k], m.weights[k]);
    // Points outside the unit disc are stored inverted, so allow an ulp or two.
    if (k != 1) EXPECT_LT(std::abs(back.x[k].value() - m.x[k].value()), 1e-15 * std::abs(m.x[k].value()));
  }

  EmpiricalMeasure two;
  two.dimension = 2;
  two.x = {ComplexPoint::from({1, 2})};
  two.y = {ComplexPoint::from({-3, 0.125})};
  two.weights = {1};
  std::stringstream t;
  write_measure_csv(t, two);
  const auto back2 = read_measure_csv(t);
  EXPECT_EQ(back2.dimension, 2);
  EXPECT_LT(std::abs(back2.y[0].value() - cplx(-3, 0.125)), 1e-14);
}

TEST(Files, PgmRoundTrip) {
  GrayImage img{3, 2, {0, 10, 20, 255, 128, 7}};
  std::stringstream s;
  write_pgm(s, img, "made by a test");
  EXPECT_EQ(s.str().substr(0, 3), "P5\n");
  const auto back = read_pgm(s);
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 2);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Files, CommandRecord) {
  Command c;
  c.subcommand = "height";
  c.arguments = {{"map", "x^2 - 1"}, {"point", "1/2"}};
  c.seed = 3;
  const json j = command_to_json(c);
  EXPECT_EQ(j["subcommand"], "height");
  EXPECT_EQ(j["arguments"]["point"], "1/2");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}
