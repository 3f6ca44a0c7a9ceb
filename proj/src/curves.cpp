#include "splitdyn/curves.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"

namespace splitdyn {

namespace {

std::vector<std::tuple<int, int, mpz_class>> terms_of(const BPoly& p) {
  std::vector<std::tuple<int, int, mpz_class>> out;
  for (int j = 0; j <= p.deg_y(); ++j) {
    const ZPoly& cj = p.c[static_cast<std::size_t>(j)];
    for (int i = 0; i <= cj.degree(); ++i)
      if (cj.c[static_cast<std::size_t>(i)] != 0) out.emplace_back(i, j, cj.c[static_cast<std::size_t>(i)]);
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    const int tl = std::get<0>(l) + std::get<1>(l), tr = std::get<0>(r) + std::get<1>(r);
    if (tl != tr) return tl > tr;
    return std::get<0>(l) > std::get<0>(r);
  });
  return out;
}

bool has_univariate_factor(const BPoly& p) {
  return content_y(p).degree() > 0 || content_y(swap_variables(p)).degree() > 0;
}

ZPoly squarefree(const ZPoly& c) {
  if (c.degree() <= 0) return ZPoly::constant(1);
  return exact_div(c, gcd(c, derivative(c)));
}

}  // namespace

BiCurve::BiCurve(const BPoly& defining) : p_(defining) {
  if (p_.is_zero()) throw PreconditionViolated("curve with zero defining polynomial");
  mpz_class g = integer_content(p_);
  if (std::get<2>(terms_of(p_).front()) < 0) g = -g;
  for (auto& col : p_.c)
    for (auto& v : col.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

bool BiCurve::is_transversal() const { return deg_x() >= 1 && deg_y() >= 1 && !has_univariate_factor(p_); }

BiCurve BiCurve::squarefree() const {
  const ZPoly cx = content_y(p_);
  const BPoly prim = exact_div(p_, cx);
  BPoly part = squarefree_in_y(prim);
  return BiCurve(BPoly({splitdyn::squarefree(cx)}) * part);
}

std::vector<std::tuple<int, int, mpz_class>> BiCurve::monomials() const { return terms_of(p_); }

std::string BiCurve::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [i, j, c] : terms_of(p_)) {
    const bool neg = c < 0;
    const mpz_class mag = abs(c);
    if (first) out << (neg ? "-" : "");
    else out << (neg ? " - " : " + ");
    first = false;
    std::vector<std::string> factors;
    if (mag != 1 || (i == 0 && j == 0)) factors.push_back(mag.get_str());
    if (i == 1) factors.emplace_back("x");
    if (i > 1) factors.push_back("x^" + std::to_string(i));
    if (j == 1) factors.emplace_back("y");
    if (j > 1) factors.push_back("y^" + std::to_string(j));
    for (std::size_t k = 0; k < factors.size(); ++k) out << (k ? "*" : "") << factors[k];
  }
  return out.str();
}

std::string BiCurve::key() const {
  std::ostringstream out;
  for (const auto& [i, j, c] : terms_of(p_)) out << i << ',' << j << ',' << c.get_str() << ';';
  return out.str();
}

BiCurve curve_from_rationals(const std::vector<std::tuple<int, int, mpq_class>>& terms) {
  mpz_class den = 1;
  int dx = 0, dy = 0;
  for (const auto& [i, j, c] : terms) {
    if (i < 0 || j < 0) throw PreconditionViolated("negative exponent in curve");
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    dx = std::max(dx, i);
    dy = std::max(dy, j);
  }
  std::vector<std::vector<mpz_class>> grid(static_cast<std::size_t>(dx + 1), std::vector<mpz_class>(static_cast<std::size_t>(dy + 1), 0));
  for (const auto& [i, j, c] : terms) {
    mpq_class scaled = c * den;
    grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += scaled.get_num();
  }
  return BiCurve(BPoly::from_grid(grid));
}

BiCurve image_curve(const BiCurve& C, const SplitEndo& phi) {
  if (!C.is_transversal()) throw PreconditionViolated("image_curve needs a curve projecting onto both factors");
  const RationalMap F = iterate(phi.f, phi.n);
  const RationalMap G = iterate(phi.g, phi.m);
  const int a = F.degree(), b = G.degree();
  const int du = C.deg_x(), dv = C.deg_y();
  const int dx = b * du, dy = a * dv;
  // Coefficients of u^i, each a polynomial in v.
  const std::vector<ZPoly> cu = swap_variables(C.defining()).c;
  const auto xs = interpolation_nodes(dx + 1);
  const auto ys = interpolation_nodes(dy + 1);
  std::vector<std::vector<mpz_class>> values(xs.size(), std::vector<mpz_class>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<ZPoly> fibre;
    for (int k = 0; k <= a; ++k) fibre.push_back(ZPoly::constant(F.F0().coeff(k) - xs[i] * F.F1().coeff(k)));
    // R1(v) = Res_u(C(u, v), F0(u) - X F1(u)) at X = xs[i].
    const ZPoly r1 = resultant(cu, du, fibre, a);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      std::vector<mpz_class> g2;
      for (int k = 0; k <= b; ++k) g2.push_back(G.F0().coeff(k) - ys[j] * G.F1().coeff(k));
      values[i][j] = resultant(r1, dy, ZPoly(std::move(g2)), b);
    }
  }
  BPoly R = interpolate_grid(values, dx, dy);
  if (R.is_zero()) throw EliminationCollapse("elimination resultant vanishes identically");
  R = strip_univariate_factors(R);
  if (R.total_degree() <= 0) throw EliminationCollapse("elimination left no transversal factor");
  return BiCurve(squarefree_in_y(R));
}

bool is_invariant(const BiCurve& C, const SplitEndo& phi) { return image_curve(C, phi) == C.squarefree(); }

CurveOrbitReport curve_preperiodicity(const BiCurve& C, const SplitEndo& phi, int max_steps, int degree_budget) {
  CurveOrbitReport report;
  const int a = iterate(phi.f, phi.n).degree(), b = iterate(phi.g, phi.m).degree();
  BiCurve cur = C.squarefree();
  std::unordered_map<std::string, int> index;
  auto record = [&](const BiCurve& c) {
    index.emplace(c.key(), static_cast<int>(report.keys.size()));
    report.keys.push_back(c.key());
    report.bidegrees.push_back(c.bidegree());
  };
  record(cur);
  for (int step = 1; step <= max_steps; ++step) {
    if (static_cast<long>(cur.deg_x()) * b > degree_budget || static_cast<long>(cur.deg_y()) * a > degree_budget) {
      report.undecided_reason = "bidegree budget exhausted";
      return report;
    }
    BiCurve next = image_curve(cur, phi);
    auto it = index.find(next.key());
    if (it != index.end()) {
      report.preperiod = it->second;
      report.period = step - it->second;
      return report;
    }
    record(next);
    cur = std::move(next);
  }
  report.undecided_reason = "step budget exhausted";
  return report;
}

BiCurve ms_curve(const Poly& ftilde, int n, int m, const LinearPoly& L) {
  if (!ftilde.field()->is_rational() || !L.field()->is_rational()) throw FieldMismatch("ms_curve works over Q");
  if (ftilde.degree() < 2) throw PreconditionViolated("ms_curve needs deg f~ >= 2");
  if (n < 0 || m < 0) throw PreconditionViolated("negative iterate");
  const Poly lhs = iterate(ftilde, n);
  const Poly rhs = L.apply(iterate(ftilde, m));
  std::vector<std::tuple<int, int, mpq_class>> terms;
  for (int i = 0; i <= lhs.degree(); ++i) terms.emplace_back(i, 0, lhs.coeff(i).rational());
  for (int j = 0; j <= rhs.degree(); ++j) terms.emplace_back(0, j, -rhs.coeff(j).rational());
  return curve_from_rationals(terms).squarefree();
}

std::optional<std::vector<ProjPointQ>> rational_fibre(const BiCurve& C, const ProjPointQ& x) {
  const int dx = C.deg_x(), dy = C.deg_y();
  std::vector<mpz_class> g;
  for (int j = 0; j <= dy; ++j) g.push_back(eval_form(C.defining().c[static_cast<std::size_t>(j)], dx, x.a(), x.b()));
  ZPoly G(g);
  if (G.is_zero()) return std::nullopt;
  std::vector<ProjPointQ> ys;
  for (const auto& r : rational_roots(G)) ys.emplace_back(r);
  if (G.degree() < dy) ys.push_back(ProjPointQ::infinity());
  return ys;
}

CurvePairsReport preperiodic_pairs_on_curve(const BiCurve& C, const RationalMap& f, const RationalMap& g,
                                            std::size_t max_points) {
  CurvePairsReport report;
  const PreperiodicEnumeration xs = preperiodic_points(f, 0.0, max_points, true);
  report.truncated = xs.truncated;
  report.preperiodic_x_count = xs.points.size();
  std::unordered_map<ProjPointQ, bool, ProjPointHash> cache;
  for (const auto& x : xs.points) {
    const auto fibre = rational_fibre(C, x);
    if (!fibre) {
      report.vertical_fibres.push_back(x);
      continue;
    }
    for (const auto& y : *fibre) {
      auto it = cache.find(y);
      if (it == cache.end()) it = cache.emplace(y, is_preperiodic(g, y).preperiodic).first;
      (it->second ? report.pairs : report.transfer_failures).emplace_back(x, y);
    }
  }
  return report;
}

}  // namespace splitdyn
