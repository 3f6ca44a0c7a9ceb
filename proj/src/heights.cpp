#include "splitdyn/heights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"

namespace splitdyn {

Place Place::prime(const mpz_class& p) {
  if (!is_prime(p)) throw PreconditionViolated(p.get_str() + " is not prime");
  Place v;
  v.archimedean = false;
  v.p = p;
  return v;
}

std::string Place::to_string() const { return archimedean ? "inf" : p.get_str(); }

double naive_height(const ProjPointQ& x) { return log_abs(x.norm()); }

ProductFormulaReport product_formula_check(const mpq_class& alpha) {
  if (alpha == 0) throw PreconditionViolated("product formula of zero");
  ProductFormulaReport report;
  const mpq_class mag = abs(alpha);
  report.terms.push_back({Place::infinity(), 0, log_abs(mag.get_num()) - log_abs(mag.get_den())});
  std::vector<std::pair<mpz_class, long>> ords;
  for (const auto& [p, e] : factor_integer(mag.get_num())) ords.emplace_back(p, e);
  for (const auto& [p, e] : factor_integer(mag.get_den())) ords.emplace_back(p, -static_cast<long>(e));
  std::sort(ords.begin(), ords.end());
  mpq_class rebuilt = 1;
  for (const auto& [p, e] : ords) {
    Place v;
    v.archimedean = false;
    v.p = p;
    report.terms.push_back({v, e, -static_cast<double>(e) * std::log(p.get_d())});
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
    if (e > 0) rebuilt *= pe;
    else rebuilt /= pe;
  }
  report.exact_zero = rebuilt == mag;
  for (const auto& t : report.terms) report.float_sum += t.log_abs;
  return report;
}

double HeightConstants::total() const {
  double s = c_inf;
  for (const auto& [p, c] : c_p) s += c;
  return s;
}

namespace {

double log_q(const mpq_class& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

mpz_class l1(const ZPoly& p) {
  mpz_class s = 0;
  for (const auto& v : p.c) s += abs(v);
  return s;
}

// Cofactors (G0, G1) of degree d-1 with G0 F0 + G1 F1 = Res * X^e Y^(2d-1-e),
// solved exactly over Q.
std::pair<std::vector<mpq_class>, std::vector<mpq_class>> cofactors(const RationalMap& f, int e) {
  const int d = f.degree();
  const int n = 2 * d;
  std::vector<std::vector<mpq_class>> m(static_cast<std::size_t>(n), std::vector<mpq_class>(static_cast<std::size_t>(n + 1), 0));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < d; ++i) {
      m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = f.F0().coeff(k - i);
      m[static_cast<std::size_t>(k)][static_cast<std::size_t>(d + i)] = f.F1().coeff(k - i);
    }
    if (k == e) m[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)] = f.resultant();
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)] == 0) ++piv;
    if (piv == n) throw PreconditionViolated("singular cofactor system");
    std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(col)]);
    auto& prow = m[static_cast<std::size_t>(col)];
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      auto& row = m[static_cast<std::size_t>(r)];
      if (row[static_cast<std::size_t>(col)] == 0) continue;
      const mpq_class factor = row[static_cast<std::size_t>(col)] / prow[static_cast<std::size_t>(col)];
      for (int j = col; j <= n; ++j) row[static_cast<std::size_t>(j)] -= factor * prow[static_cast<std::size_t>(j)];
    }
  }
  std::vector<mpq_class> g0, g1;
  for (int i = 0; i < n; ++i) {
    const mpq_class v = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] / m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    (i < d ? g0 : g1).push_back(v);
  }
  return {g0, g1};
}

mpq_class l1(const std::vector<mpq_class>& v) {
  mpq_class s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

void require_degree_two(const RationalMap& f) {
  if (f.degree() < 2) throw PreconditionViolated("heights need a map of degree >= 2");
}

void require_tol(double tol) {
  if (!(tol > 0)) throw PreconditionViolated("tolerance must be positive");
}

// Number of terms n with c * d^-n / (d-1) < tol.
int terms_for(double c, int d, double tol) {
  int n = 1;
  while (c * std::pow(static_cast<double>(d), -n) / (d - 1) >= tol) ++n;
  return n;
}

double tail(double c, int d, int n) { return c * std::pow(static_cast<double>(d), -n) / (d - 1); }

struct LocalResult {
  double value;
  double error;
};

LocalResult archimedean(const RationalMap& f, const ProjPointQ& x, double c, double tol) {
  const int d = f.degree();
  std::vector<double> f0(static_cast<std::size_t>(d + 1)), f1(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    f0[static_cast<std::size_t>(i)] = f.F0().coeff(i).get_d();
    f1[static_cast<std::size_t>(i)] = f.F1().coeff(i).get_d();
  }
  auto form = [&](const std::vector<double>& F, double a, double b) {
    double acc = 0, bp = 1;
    std::vector<double> bpow(static_cast<std::size_t>(d + 1));
    for (int i = 0; i <= d; ++i) {
      bpow[static_cast<std::size_t>(i)] = bp;
      bp *= b;
    }
    for (int i = d; i >= 0; --i) acc = acc * a + F[static_cast<std::size_t>(i)] * bpow[static_cast<std::size_t>(d - i)];
    return acc;
  };
  const mpz_class norm = x.norm();
  double a = mpq_class(x.a(), norm).get_d();
  double b = mpq_class(x.b(), norm).get_d();
  double value = log_abs(norm);
  const int n = c == 0 ? 1 : terms_for(c, d, tol);
  double scale = 1.0 / d;
  for (int k = 0; k < n; ++k) {
    const double u = form(f0, a, b), v = form(f1, a, b);
    const double m = std::max(std::fabs(u), std::fabs(v));
    value += scale * std::log(m);
    a = u / m;
    b = v / m;
    scale /= d;
  }
  return {value, tail(c, d, n) + 1e-13 * (1 + std::fabs(value))};
}

LocalResult nonarchimedean(const RationalMap& f, const ProjPointQ& x, const mpz_class& p, double tol) {
  const int d = f.degree();
  const int r = valuation(f.resultant(), p);
  if (r == 0) return {0.0, 0.0};
  const double logp = std::log(p.get_d());
  const double c = r * logp;
  const int n = terms_for(c, d, tol);
  long precision = static_cast<long>(n + 1) * r + 1;
  mpz_class mod;
  mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(precision));
  mpz_class a = x.a() % mod, b = x.b() % mod;
  double sum = 0, scale = 1.0 / d;
  for (int k = 0; k < n; ++k) {
    auto [u, v] = f.lift(a, b);
    u %= mod;
    v %= mod;
    const int g = std::min(u == 0 ? static_cast<int>(precision) : valuation(u, p), v == 0 ? static_cast<int>(precision) : valuation(v, p));
    if (g > r) throw PreconditionViolated("p-adic precision exhausted");
    mpz_class pg;
    mpz_pow_ui(pg.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(g));
    precision -= g;
    mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(precision));
    a = (u / pg) % mod;
    b = (v / pg) % mod;
    sum += g * scale;
    scale /= d;
  }
  return {-logp * sum, tail(c, d, n)};
}

}  // namespace

HeightConstants height_constants(const RationalMap& f) {
  require_degree_two(f);
  const int d = f.degree();
  HeightConstants h;
  const mpz_class U = std::max(l1(f.F0()), l1(f.F1()));
  auto [g0, g1] = cofactors(f, 2 * d - 1);
  auto [h0, h1] = cofactors(f, 0);
  const mpq_class M = std::max(l1(g0) + l1(g1), l1(h0) + l1(h1));
  const double lower = log_abs(f.resultant()) - log_q(M);
  h.c_inf = std::max(std::fabs(log_abs(U)), std::fabs(lower));
  for (const auto& [p, e] : factor_integer(abs(f.resultant()))) h.c_p.emplace_back(p, e * std::log(p.get_d()));
  return h;
}

std::vector<Place> relevant_places(const RationalMap& f) {
  std::vector<Place> places{Place::infinity()};
  for (const auto& [p, e] : factor_integer(abs(f.resultant()))) {
    Place v;
    v.archimedean = false;
    v.p = p;
    places.push_back(v);
  }
  return places;
}

double local_canonical_height(const RationalMap& f, const ProjPointQ& x, const Place& v, double tol) {
  require_tol(tol);
  require_degree_two(f);
  if (v.archimedean) return archimedean(f, x, height_constants(f).c_inf, tol).value;
  return nonarchimedean(f, x, v.p, tol).value;
}

HeightValue canonical_height(const RationalMap& f, const ProjPointQ& x, double tol) {
  require_tol(tol);
  const HeightConstants hc = height_constants(f);
  const auto places = relevant_places(f);
  const double share = tol / static_cast<double>(places.size());
  HeightValue out;
  for (const auto& v : places) {
    const LocalResult r = v.archimedean ? archimedean(f, x, hc.c_inf, share) : nonarchimedean(f, x, v.p, share);
    out.per_place.emplace_back(v, r.value);
    out.value += r.value;
    out.error_radius += r.error;
  }
  return out;
}

double escape_bound(const RationalMap& f) {
  const HeightConstants hc = height_constants(f);
  return hc.total() / (f.degree() - 1) + 1.0;
}

namespace {

// 2^k >= exp(B), so norms above it certainly have height above B.
mpz_class norm_threshold(double B) {
  const double k = std::ceil(std::max(B, 0.0) / std::log(2.0)) + 1;
  if (k > 1e7) throw ResourceLimit("escape bound too large");
  mpz_class t;
  mpz_ui_pow_ui(t.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return t;
}

constexpr std::size_t kMaxOrbit = 10'000'000;

}  // namespace

PreperiodicityDecision is_preperiodic(const RationalMap& f, const ProjPointQ& x) {
  PreperiodicityDecision out;
  out.escape_bound = escape_bound(f);
  const mpz_class threshold = norm_threshold(out.escape_bound);
  std::unordered_map<ProjPointQ, int, ProjPointHash> seen;
  ProjPointQ z = x;
  for (;;) {
    auto it = seen.find(z);
    if (it != seen.end()) {
      out.preperiodic = true;
      out.tail = it->second;
      out.period = static_cast<int>(out.orbit.size()) - it->second;
      return out;
    }
    out.orbit.push_back(z);
    if (z.norm() > threshold) return out;
    if (out.orbit.size() > kMaxOrbit) throw ResourceLimit("orbit exceeded the step budget");
    seen.emplace(z, static_cast<int>(out.orbit.size()) - 1);
    z = f(z);
  }
}

namespace {

long ord_p(const mpz_class& n, const mpz_class& p) {
  if (n == 0) return 0;
  return static_cast<long>(mpz_remove(mpz_class().get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long ord_p(const mpq_class& q, const mpz_class& p) { return ord_p(q.get_num(), p) - ord_p(q.get_den(), p); }

// floor(a / b) for b > 0.
long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// For a polynomial, a point whose orbit leaves the disc |x|_v <= R_v at any
// place never returns, so preperiodic points are a/b with b | D and
// |a| <= R b. D collects p^e with p^e <= R_p at the primes of the
// coefficients.
struct LocalBox {
  mpz_class D = 1;
  mpq_class R = 1;
};

LocalBox polynomial_box(const Poly& p) {
  const int d = p.degree();
  std::vector<mpq_class> a;
  for (int i = 0; i <= d; ++i) a.push_back(p.coeff(i).rational());
  LocalBox box;
  mpq_class sum = 1;
  for (int i = 0; i < d; ++i) sum += abs(a[static_cast<std::size_t>(i)]);
  box.R = std::max<mpq_class>(mpq_class(1), sum / abs(a.back()));
  std::vector<mpz_class> primes;
  for (const auto& c : a) {
    if (c == 0) continue;
    for (const mpz_class& part : {c.get_num(), c.get_den()})
      if (abs(part) > 1)
        for (const auto& [q, e] : factor_integer(part)) primes.push_back(q);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const auto& q : primes) {
    // log_q R_q = max(ord(a_d)/(d-1), max_i (ord(a_d) - ord(a_i))/(d-i)).
    const long od = ord_p(a.back(), q);
    long e = floor_div(od, d - 1);
    for (int i = 0; i < d; ++i)
      if (a[static_cast<std::size_t>(i)] != 0) e = std::max(e, floor_div(od - ord_p(a[static_cast<std::size_t>(i)], q), d - i));
    if (e > 0) {
      mpz_class pe;
      mpz_pow_ui(pe.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
      box.D *= pe;
    }
  }
  return box;
}

}  // namespace

PreperiodicEnumeration preperiodic_points(const RationalMap& f, double height_bound, std::size_t max_points,
                                          bool truncate) {
  PreperiodicEnumeration out;
  out.escape_bound = escape_bound(f);
  if (height_bound < out.escape_bound)
    out.warning = "height bound " + std::to_string(height_bound) + " is below the escape bound " +
                  std::to_string(out.escape_bound) + "; searched up to the escape bound";
  out.searched_bound = std::max(height_bound, out.escape_bound);
  std::optional<LocalBox> box;
  if (f.is_polynomial() && f.degree() >= 2) {
    box = polynomial_box(f.as_poly());
    double count = 0;
    for (const auto& b : divisors(box->D)) count += 2 * std::floor(mpq_class(box->R * b).get_d()) + 1;
    if (count > static_cast<double>(max_points)) box.reset();
  }
  double H = std::floor(std::exp(out.searched_bound));
  if (!box && (!(H < 1e9) || (2 * H + 1) * (H + 1) > static_cast<double>(max_points))) {
    if (!truncate)
      throw ResourceLimit("preperiodic enumeration needs more than " + std::to_string(max_points) + " candidates");
    H = std::floor(std::sqrt(static_cast<double>(max_points) / 2.0));
    out.truncated = true;
    out.searched_bound = std::log(std::max(H, 1.0));
  }
  const long h = static_cast<long>(H);
  const mpz_class threshold = norm_threshold(out.escape_bound);

  // Every point of an orbit shares the verdict of its start.
  std::unordered_map<ProjPointQ, bool, ProjPointHash> verdict;
  auto decide = [&](const ProjPointQ& start) {
    std::unordered_map<ProjPointQ, int, ProjPointHash> seen;
    std::vector<ProjPointQ> path;
    ProjPointQ z = start;
    bool result;
    for (;;) {
      auto known = verdict.find(z);
      if (known != verdict.end()) {
        result = known->second;
        break;
      }
      if (seen.count(z)) {
        result = true;
        break;
      }
      if (z.norm() > threshold) {
        result = false;
        path.push_back(z);
        break;
      }
      seen.emplace(z, 0);
      path.push_back(z);
      z = f(z);
    }
    for (const auto& p : path) verdict.emplace(p, result);
    return result;
  };

  if (decide(ProjPointQ::infinity())) out.points.push_back(ProjPointQ::infinity());
  if (box) {
    for (const auto& b : divisors(box->D)) {
      const mpq_class rb = box->R * b;
      const mpz_class top = rb.get_num() / rb.get_den();
      for (mpz_class a = -top; a <= top; ++a) {
        if (gcd(a, b) != 1) continue;
        ProjPointQ x{a, b};
        if (decide(x)) out.points.push_back(x);
      }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
  }
  for (long b = 1; b <= h; ++b) {
    for (long a = -h; a <= h; ++a) {
      if (std::gcd(a, b) != 1) continue;
      ProjPointQ x{mpz_class(a), mpz_class(b)};
      if (decide(x)) out.points.push_back(x);
    }
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

}  // namespace splitdyn
