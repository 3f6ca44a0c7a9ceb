#pragma once

#include <random>
#include <string>

#include "splitdyn/io.hpp"

namespace testing_helpers {

using namespace splitdyn;

inline Poly P(const std::string& s, const FieldPtr& F = Field::rationals()) { return parse_poly(s, F); }
inline RationalMap M(const std::string& s) { return parse_rational_map(s); }
inline BiCurve C(const std::string& s) { return parse_curve(s); }
inline FieldElement Q(const std::string& s) {
  mpq_class q(s);
  q.canonicalize();
  return FieldElement(Field::rationals(), q);
}
inline ProjPointQ pt(const std::string& s) { return parse_point(s); }

inline mpq_class random_rational(std::mt19937_64& rng, long h, bool nonzero = false) {
  for (;;) {
    const long num = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * h + 1)) - h;
    const long den = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(h));
    if (nonzero && num == 0) continue;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
}

inline Poly random_poly(std::mt19937_64& rng, int degree, long h, const FieldPtr& F = Field::rationals()) {
  std::vector<mpq_class> c;
  for (int i = 0; i < degree; ++i) c.push_back(random_rational(rng, h));
  c.push_back(random_rational(rng, h, true));
  return Poly::from_rationals(F, c);
}

}  // namespace testing_helpers
