#include "splitdyn/zpoly.hpp"

#include <algorithm>
#include <cstdint>

#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"

namespace splitdyn {

ZPoly operator+(const ZPoly& a, const ZPoly& b) {
  std::vector<mpz_class> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
  return ZPoly(std::move(r));
}

ZPoly operator-(const ZPoly& a) {
  ZPoly r = a;
  for (auto& v : r.c) v = -v;
  return r;
}

ZPoly operator-(const ZPoly& a, const ZPoly& b) { return a + (-b); }

namespace {

// Kronecker substitution: pack each polynomial into one integer with
// word-aligned slots wide enough for any product coefficient, multiply once
// with GMP, and unpack. Signs are handled by splitting into positive and
// negative parts and by biasing every output slot by half its range.
ZPoly kronecker_mul(const ZPoly& a, const ZPoly& b) {
  auto max_bits = [](const ZPoly& p) {
    std::size_t m = 0;
    for (const auto& v : p.c) m = std::max(m, mpz_sizeinbase(v.get_mpz_t(), 2));
    return m;
  };
  const std::size_t n = std::min(a.c.size(), b.c.size());
  std::size_t len_bits = 0;
  while ((std::size_t{1} << len_bits) <= n) ++len_bits;
  const std::size_t bits = max_bits(a) + max_bits(b) + len_bits + 2;
  const std::size_t words = (bits + 63) / 64;

  auto pack = [&](const ZPoly& p) {
    std::vector<std::uint64_t> pos(p.c.size() * words, 0), neg(p.c.size() * words, 0);
    for (std::size_t i = 0; i < p.c.size(); ++i) {
      const int sign = sgn(p.c[i]);
      if (sign == 0) continue;
      mpz_export(&(sign > 0 ? pos : neg)[i * words], nullptr, -1, 8, 0, 0, p.c[i].get_mpz_t());
    }
    mpz_class P, N;
    mpz_import(P.get_mpz_t(), pos.size(), -1, 8, 0, 0, pos.data());
    mpz_import(N.get_mpz_t(), neg.size(), -1, 8, 0, 0, neg.data());
    return mpz_class(P - N);
  };
  const std::size_t out_len = a.c.size() + b.c.size() - 1;
  std::vector<std::uint64_t> buf(out_len * words + 1, 0);
  for (std::size_t j = 0; j < out_len; ++j) buf[j * words + words - 1] = std::uint64_t{1} << 63;
  mpz_class bias;
  mpz_import(bias.get_mpz_t(), buf.size(), -1, 8, 0, 0, buf.data());
  mpz_class r = pack(a) * pack(b) + bias;
  std::fill(buf.begin(), buf.end(), 0);
  mpz_export(buf.data(), nullptr, -1, 8, 0, 0, r.get_mpz_t());
  mpz_class half;
  mpz_ui_pow_ui(half.get_mpz_t(), 2, 64 * words - 1);
  std::vector<mpz_class> out(out_len);
  for (std::size_t j = 0; j < out_len; ++j) {
    mpz_import(out[j].get_mpz_t(), words, -1, 8, 0, 0, &buf[j * words]);
    out[j] -= half;
  }
  return ZPoly(std::move(out));
}

}  // namespace

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (std::min(a.c.size(), b.c.size()) >= 12) return kronecker_mul(a, b);
  std::vector<mpz_class> r(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
  }
  return ZPoly(std::move(r));
}

ZPoly operator*(const mpz_class& s, const ZPoly& a) {
  ZPoly r = a;
  for (auto& v : r.c) v *= s;
  r.trim();
  return r;
}

ZPoly derivative(const ZPoly& a) {
  std::vector<mpz_class> r;
  for (int i = 1; i <= a.degree(); ++i) r.push_back(a.c[static_cast<std::size_t>(i)] * i);
  return ZPoly(std::move(r));
}

mpz_class eval(const ZPoly& a, const mpz_class& x) {
  mpz_class acc = 0;
  for (std::size_t i = a.c.size(); i-- > 0;) acc = acc * x + a.c[i];
  return acc;
}

mpz_class content(const ZPoly& a) {
  mpz_class g = 0;
  for (const auto& v : a.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

ZPoly primitive_part(const ZPoly& a) {
  if (a.is_zero()) return a;
  mpz_class g = content(a);
  if (a.lead() < 0) g = -g;
  ZPoly r = a;
  for (auto& v : r.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  return r;
}

bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient) {
  if (b.is_zero()) throw DivisionByZero("ZPoly division by zero");
  std::vector<mpz_class> rem = a.c;
  const int db = b.degree();
  if (a.degree() < db) {
    if (quotient) *quotient = ZPoly();
    return a.is_zero();
  }
  std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
  for (int k = a.degree(); k >= db; --k) {
    mpz_class& top = rem[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.lead().get_mpz_t())) return false;
    mpz_class t = top / b.lead();
    q[static_cast<std::size_t>(k - db)] = t;
    for (int i = 0; i <= db; ++i) mpz_submul(rem[static_cast<std::size_t>(k - db + i)].get_mpz_t(), t.get_mpz_t(), b.c[static_cast<std::size_t>(i)].get_mpz_t());
  }
  for (const auto& v : rem)
    if (v != 0) return false;
  if (quotient) *quotient = ZPoly(std::move(q));
  return true;
}

ZPoly exact_div(const ZPoly& a, const ZPoly& b) {
  ZPoly q;
  if (!divides(b, a, &q)) throw PreconditionViolated("ZPoly exact_div: division is not exact");
  return q;
}

ZPoly pseudo_rem(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) throw DivisionByZero("pseudo remainder by zero");
  ZPoly r = a;
  const int db = b.degree();
  while (!r.is_zero() && r.degree() >= db) {
    const int shift = r.degree() - db;
    const mpz_class lr = r.lead();
    std::vector<mpz_class> t(static_cast<std::size_t>(shift), 0);
    for (const auto& v : b.c) t.push_back(v * lr);
    r = b.lead() * r - ZPoly(std::move(t));
  }
  return r;
}

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero()) return primitive_part(b).is_zero() ? b : content(b) * primitive_part(b);
  if (b.is_zero()) return content(a) * primitive_part(a);
  mpz_class g = gcd(content(a), content(b));
  ZPoly p = primitive_part(a), q = primitive_part(b);
  if (p.degree() < q.degree()) std::swap(p, q);
  while (!q.is_zero()) {
    ZPoly r = pseudo_rem(p, q);
    p = std::move(q);
    q = primitive_part(r);
  }
  if (p.degree() == 0) return ZPoly::constant(g);
  return g * primitive_part(p);
}

namespace {

template <typename T, typename IsZero, typename Div>
T bareiss(std::vector<std::vector<T>> m, const T& one, IsZero is_zero, Div exact) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  bool negate = false;
  T prev = one;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (is_zero(m[k][k])) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && is_zero(m[swap_row][k])) ++swap_row;
      if (swap_row == n) return T{};
      std::swap(m[k], m[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    }
    prev = m[k][k];
  }
  T det = m[n - 1][n - 1];
  if (negate) det = -det;
  return det;
}

template <typename T>
std::vector<std::vector<T>> sylvester(const std::vector<T>& a, int da, const std::vector<T>& b, int db, const T& zero) {
  const int n = da + db;
  std::vector<std::vector<T>> m(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(n), zero));
  auto at = [&](const std::vector<T>& v, int i) { return i < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(i)] : zero; };
  for (int r = 0; r < db; ++r)
    for (int i = 0; i <= da; ++i) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + da - i)] = at(a, i);
  for (int r = 0; r < da; ++r)
    for (int i = 0; i <= db; ++i) m[static_cast<std::size_t>(db + r)][static_cast<std::size_t>(r + db - i)] = at(b, i);
  return m;
}

}  // namespace

mpz_class determinant(std::vector<std::vector<mpz_class>> m) {
  return bareiss<mpz_class>(
      std::move(m), mpz_class(1), [](const mpz_class& v) { return v == 0; },
      [](const mpz_class& num, const mpz_class& den) {
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return q;
      });
}

mpz_class resultant(const ZPoly& a, int da, const ZPoly& b, int db) {
  if (a.degree() > da || b.degree() > db) throw PreconditionViolated("resultant: formal degree below actual degree");
  return determinant(sylvester<mpz_class>(a.c, da, b.c, db, mpz_class(0)));
}

ZPoly resultant(const std::vector<ZPoly>& a, int da, const std::vector<ZPoly>& b, int db) {
  if (static_cast<int>(a.size()) > da + 1 || static_cast<int>(b.size()) > db + 1)
    throw PreconditionViolated("resultant: formal degree below actual degree");
  return bareiss<ZPoly>(
      sylvester<ZPoly>(a, da, b, db, ZPoly()), ZPoly::constant(1), [](const ZPoly& v) { return v.is_zero(); },
      [](const ZPoly& num, const ZPoly& den) { return exact_div(num, den); });
}

std::vector<mpq_class> rational_roots(const ZPoly& a_in) {
  if (a_in.is_zero()) throw PreconditionViolated("rational_roots of the zero polynomial");
  std::vector<mpq_class> roots;
  ZPoly a = a_in;
  std::size_t shift = 0;
  while (shift < a.c.size() && a.c[shift] == 0) ++shift;
  if (shift > 0) {
    roots.emplace_back(0);
    a = ZPoly(std::vector<mpz_class>(a.c.begin() + static_cast<long>(shift), a.c.end()));
  }
  if (a.degree() < 1) return roots;
  a = primitive_part(a);
  // Cauchy bound on |root|.
  mpq_class bound = 1;
  for (int i = 0; i < a.degree(); ++i) bound = std::max<mpq_class>(bound, mpq_class(1) + mpq_class(abs(a.c[static_cast<std::size_t>(i)]), abs(a.lead())));
  auto is_root = [&](const mpz_class& p, const mpz_class& q) {
    // q^n a(p/q) as an integer.
    mpz_class acc = 0, qpow = 1;
    std::vector<mpz_class> qp(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      qp[i] = qpow;
      qpow *= q;
    }
    for (std::size_t i = a.c.size(); i-- > 0;) acc = acc * p + a.c[i] * qp[a.c.size() - 1 - i];
    return acc == 0;
  };
  const auto num_divs = divisors(a.c[0]);
  const auto den_divs = divisors(a.lead());
  for (const auto& q : den_divs) {
    for (const auto& p : num_divs) {
      if (gcd(p, q) != 1) continue;
      if (mpq_class(p, q) > bound) break;
      for (int s : {1, -1}) {
        mpz_class sp = s * p;
        if (is_root(sp, q)) roots.emplace_back(sp, q);
      }
    }
  }
  for (auto& r : roots) r.canonicalize();
  std::sort(roots.begin(), roots.end());
  return roots;
}

BPoly BPoly::from_grid(const std::vector<std::vector<mpz_class>>& grid) {
  std::size_t ny = 0;
  for (const auto& row : grid) ny = std::max(ny, row.size());
  std::vector<ZPoly> c(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<mpz_class> col(grid.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (j < grid[i].size()) col[i] = grid[i][j];
    c[j] = ZPoly(std::move(col));
  }
  return BPoly(std::move(c));
}

int BPoly::deg_x() const {
  int d = -1;
  for (const auto& p : c) d = std::max(d, p.degree());
  return d;
}

int BPoly::total_degree() const {
  int d = -1;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!c[j].is_zero()) d = std::max(d, c[j].degree() + static_cast<int>(j));
  return d;
}

mpz_class BPoly::coeff(int i, int j) const {
  if (j < 0 || j > deg_y()) return 0;
  return c[static_cast<std::size_t>(j)].coeff(i);
}

BPoly operator+(const BPoly& a, const BPoly& b) {
  std::vector<ZPoly> r(std::max(a.c.size(), b.c.size()));
  for (std::size_t j = 0; j < a.c.size(); ++j) r[j] = r[j] + a.c[j];
  for (std::size_t j = 0; j < b.c.size(); ++j) r[j] = r[j] + b.c[j];
  return BPoly(std::move(r));
}

BPoly operator-(const BPoly& a, const BPoly& b) { return a + mpz_class(-1) * b; }

BPoly operator*(const BPoly& a, const BPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<ZPoly> r(a.c.size() + b.c.size() - 1);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
  }
  return BPoly(std::move(r));
}

BPoly operator*(const mpz_class& s, const BPoly& a) {
  BPoly r = a;
  for (auto& p : r.c) p = s * p;
  r.trim();
  return r;
}

BPoly swap_variables(const BPoly& a) {
  const int dx = a.deg_x();
  std::vector<ZPoly> r(static_cast<std::size_t>(std::max(dx + 1, 0)));
  for (int i = 0; i <= dx; ++i) {
    std::vector<mpz_class> col(a.c.size(), 0);
    for (std::size_t j = 0; j < a.c.size(); ++j) col[j] = a.c[j].coeff(i);
    r[static_cast<std::size_t>(i)] = ZPoly(std::move(col));
  }
  return BPoly(std::move(r));
}

BPoly derivative_x(const BPoly& a) {
  BPoly r = a;
  for (auto& p : r.c) p = derivative(p);
  r.trim();
  return r;
}

BPoly derivative_y(const BPoly& a) {
  std::vector<ZPoly> r;
  for (std::size_t j = 1; j < a.c.size(); ++j) r.push_back(mpz_class(static_cast<long>(j)) * a.c[j]);
  return BPoly(std::move(r));
}

mpz_class eval(const BPoly& a, const mpz_class& x, const mpz_class& y) { return eval(eval_x(a, x), y); }

ZPoly eval_x(const BPoly& a, const mpz_class& x) {
  std::vector<mpz_class> r;
  for (const auto& p : a.c) r.push_back(eval(p, x));
  return ZPoly(std::move(r));
}

ZPoly eval_y(const BPoly& a, const mpz_class& y) {
  ZPoly acc;
  for (std::size_t j = a.c.size(); j-- > 0;) acc = y * acc + a.c[j];
  return acc;
}

mpz_class integer_content(const BPoly& a) {
  mpz_class g = 0;
  for (const auto& p : a.c) {
    mpz_class cp = content(p);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), cp.get_mpz_t());
  }
  return g;
}

ZPoly content_y(const BPoly& a) {
  ZPoly g;
  for (const auto& p : a.c) {
    g = gcd(g, p);
    if (g.degree() == 0 && abs(g.lead()) == 1) break;
  }
  if (!g.is_zero() && g.lead() < 0) g = -g;
  return g;
}

BPoly exact_div(const BPoly& a, const ZPoly& b) {
  BPoly r = a;
  for (auto& p : r.c) p = exact_div(p, b);
  return r;
}

BPoly exact_div(const BPoly& a, const BPoly& b) {
  if (b.is_zero()) throw DivisionByZero("BPoly division by zero");
  BPoly rem = a;
  const int db = b.deg_y();
  std::vector<ZPoly> q(static_cast<std::size_t>(std::max(a.deg_y() - db + 1, 0)));
  while (!rem.is_zero()) {
    const int dr = rem.deg_y();
    if (dr < db) throw PreconditionViolated("BPoly exact_div: division is not exact");
    ZPoly t;
    if (!divides(b.c.back(), rem.c.back(), &t)) throw PreconditionViolated("BPoly exact_div: division is not exact");
    q[static_cast<std::size_t>(dr - db)] = t;
    std::vector<ZPoly> shifted(static_cast<std::size_t>(dr - db));
    shifted.push_back(t);
    rem = rem - BPoly(std::move(shifted)) * b;
  }
  return BPoly(std::move(q));
}

BPoly strip_univariate_factors(const BPoly& a) {
  if (a.is_zero()) return a;
  BPoly r = exact_div(a, content_y(a));
  BPoly s = swap_variables(r);
  s = exact_div(s, content_y(s));
  return swap_variables(s);
}

namespace {

BPoly pseudo_rem_y(const BPoly& a, const BPoly& b) {
  BPoly r = a;
  const int db = b.deg_y();
  const BPoly lb({b.c.back()});
  while (!r.is_zero() && r.deg_y() >= db) {
    std::vector<ZPoly> t(static_cast<std::size_t>(r.deg_y() - db));
    t.push_back(r.c.back());
    r = lb * r - BPoly(std::move(t)) * b;
  }
  return r;
}

BPoly primitive_y(const BPoly& a) {
  if (a.is_zero()) return a;
  return exact_div(a, content_y(a));
}

}  // namespace

BPoly gcd(const BPoly& a, const BPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const ZPoly ca = content_y(a), cb = content_y(b);
  const ZPoly gc = gcd(ca, cb);
  BPoly p = exact_div(a, ca), q = exact_div(b, cb);
  if (p.deg_y() < q.deg_y()) std::swap(p, q);
  while (!q.is_zero() && q.deg_y() > 0) {
    BPoly r = pseudo_rem_y(p, q);
    p = std::move(q);
    q = primitive_y(r);
  }
  // q is zero (p is the gcd) or a nonzero polynomial in x alone (coprime in y).
  if (!q.is_zero()) return BPoly({gc});
  return BPoly({gc}) * primitive_y(p);
}

BPoly squarefree_in_y(const BPoly& a) {
  const BPoly dy = derivative_y(a);
  if (dy.is_zero()) return a;
  return exact_div(a, gcd(a, dy));
}

std::vector<mpz_class> interpolation_nodes(int count) {
  std::vector<mpz_class> nodes;
  for (int k = 0; static_cast<int>(nodes.size()) < count; ++k) {
    if (k == 0) {
      nodes.emplace_back(0);
    } else {
      nodes.emplace_back(k);
      if (static_cast<int>(nodes.size()) < count) nodes.emplace_back(-k);
    }
  }
  return nodes;
}

namespace {

// Monomial coefficients of the interpolant through (nodes[k], values[k]).
std::vector<mpq_class> interpolate(const std::vector<mpz_class>& nodes, std::vector<mpq_class> dd) {
  const std::size_t n = dd.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t k = n - 1; k >= level; --k) dd[k] = (dd[k] - dd[k - 1]) / mpq_class(nodes[k] - nodes[k - level]);
  std::vector<mpq_class> poly(n, mpq_class(0));
  for (std::size_t k = n; k-- > 0;) {
    // poly = poly * (x - nodes[k]) + dd[k]
    std::vector<mpq_class> next(n, mpq_class(0));
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] += poly[i];
    for (std::size_t i = 0; i < n; ++i) next[i] -= poly[i] * nodes[k];
    next[0] += dd[k];
    poly = std::move(next);
  }
  return poly;
}

mpz_class to_integer(const mpq_class& q) {
  if (q.get_den() != 1) throw PreconditionViolated("interpolation produced a non-integral coefficient");
  return q.get_num();
}

}  // namespace

BPoly interpolate_grid(const std::vector<std::vector<mpz_class>>& values, int dx, int dy) {
  const auto xs = interpolation_nodes(dx + 1);
  const auto ys = interpolation_nodes(dy + 1);
  // rows[i][j]: coefficient of y^j at x = xs[i].
  std::vector<std::vector<mpq_class>> rows;
  for (int i = 0; i <= dx; ++i) {
    std::vector<mpq_class> v;
    for (int j = 0; j <= dy; ++j) v.emplace_back(values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    rows.push_back(interpolate(ys, std::move(v)));
  }
  std::vector<std::vector<mpz_class>> grid(static_cast<std::size_t>(dx + 1), std::vector<mpz_class>(static_cast<std::size_t>(dy + 1)));
  for (int j = 0; j <= dy; ++j) {
    std::vector<mpq_class> v;
    for (int i = 0; i <= dx; ++i) v.push_back(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    auto coeffs = interpolate(xs, std::move(v));
    for (int i = 0; i <= dx; ++i) grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_integer(coeffs[static_cast<std::size_t>(i)]);
  }
  return BPoly::from_grid(grid);
}

}  // namespace splitdyn
