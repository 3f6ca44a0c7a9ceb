#pragma once

// Text and file formats: the expression parser for maps and curves, JSON
// forms of exact objects, CSV measures and binary PGM images.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>

#include <json.hpp>

#include "splitdyn/curves.hpp"
#include "splitdyn/heights.hpp"
#include "splitdyn/measure.hpp"
#include "splitdyn/numeric.hpp"
#include "splitdyn/poly.hpp"
#include "splitdyn/rational_map.hpp"

namespace splitdyn {

using json = nlohmann::json;

/// Expressions over rational literals, x, and t (the generator of `field`),
/// with + - * / ^, parentheses and implicit products such as "2x" or
/// "(x+1)(x-1)". Exponents are integer literals. A quotient whose
/// denominator survives cancellation becomes a RationalMap, which must have
/// rational coefficients.
std::variant<Poly, RationalMap> parse_map(const std::string& text, const FieldPtr& field = Field::rationals());

/// parse_map that insists on a polynomial.
Poly parse_poly(const std::string& text, const FieldPtr& field = Field::rationals());

/// parse_map with polynomials promoted to RationalMap.
RationalMap parse_rational_map(const std::string& text);

/// A curve in x and y, either an expression or "lhs = rhs".
BiCurve parse_curve(const std::string& text);

/// Q[t]/(m) from the text of m in t; m is made monic.
FieldPtr parse_field(const std::string& text);

json field_to_json(const FieldPtr& field);
FieldPtr field_from_json(const json& j);

/// {"field": {...}, "coeffs": ["0", "-1", "2"]}, lowest degree first.
/// Extension coefficients are written as expressions in t.
json poly_to_json(const Poly& p);
Poly poly_from_json(const json& j);

json map_to_json(const RationalMap& f);
json linear_to_json(const LinearPoly& L);

/// {"monomials": [[i, j, "coef"], ...]} for the terms coef*x^i*y^j.
json curve_to_json(const BiCurve& C);
BiCurve curve_from_json(const json& j);

/// {"value": ..., "error": ..., "places": [{"v": "inf", "lambda": ...}, ...]}.
json height_to_json(const HeightValue& h);

/// "inf" for points at (or numerically at) infinity, else "re,im"-style
/// pair as a JSON array.
json complex_point_to_json(const ComplexPoint& p);

/// Rows "re,im,weight" (or "re1,im1,re2,im2,weight") with 17 significant
/// digits; infinity is written as inf,inf. A non-empty comment (one line)
/// goes first as "# comment"; the reader skips such lines.
void write_measure_csv(std::ostream& out, const EmpiricalMeasure& m, const std::string& comment = "");
EmpiricalMeasure read_measure_csv(std::istream& in);

/// Binary 8-bit PGM (P5).
void write_pgm(std::ostream& out, const GrayImage& image, const std::string& comment = "");
GrayImage read_pgm(std::istream& in);

/// A full record of one CLI invocation; every output carries it so that the
/// run can be repeated.
struct Command {
  std::string subcommand;
  std::map<std::string, std::string> arguments;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  long budget_bits = 0;
  int max_steps = 0;
  long samples = 0;
  std::string output;
};

json command_to_json(const Command& c);

/// %.17g.
std::string format_double(double v);

}  // namespace splitdyn
