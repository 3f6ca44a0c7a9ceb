#include "splitdyn/arith.hpp"

#include <algorithm>
#include <cmath>

#include "splitdyn/errors.hpp"

namespace splitdyn {

namespace {

constexpr unsigned long kTrialLimit = 10000;

mpz_class pollard_brent(const mpz_class& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  mpz_class y = seed % n, c = (seed * 7 + 3) % n, m = 64, g = 1, r = 1, q = 1, x, ys;
  auto step = [&](const mpz_class& v) { return (v * v + c) % n; };
  while (g == 1) {
    x = y;
    for (mpz_class i = 0; i < r; ++i) y = step(y);
    mpz_class k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (mpz_class i = 0; i < std::min<mpz_class>(m, r - k); ++i) {
        y = step(y);
        q = (q * abs(x - y)) % n;
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = step(ys);
      g = gcd(abs(x - ys), n);
    } while (g == 1);
  }
  return g;
}

void factor_into(mpz_class n, std::vector<mpz_class>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (unsigned long seed = 2;; ++seed) {
    mpz_class d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

}  // namespace

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<std::pair<mpz_class, int>> factor_integer(mpz_class n) {
  if (n == 0) throw PreconditionViolated("factor_integer: zero has no factorisation");
  n = abs(n);
  std::vector<mpz_class> primes;
  for (unsigned long p = 2; p < kTrialLimit && n > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      primes.emplace_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<mpz_class, int>> result;
  for (const auto& p : primes) {
    if (!result.empty() && result.back().first == p)
      ++result.back().second;
    else
      result.emplace_back(p, 1);
  }
  return result;
}

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> ds{1};
  for (const auto& [p, e] : factor_integer(n)) {
    const std::size_t count = ds.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

int valuation(mpz_class n, const mpz_class& p) {
  if (n == 0) throw PreconditionViolated("valuation of zero");
  int v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

std::optional<mpz_class> exact_root(const mpz_class& n, unsigned long k) {
  if (k == 0) return std::nullopt;
  if (n < 0 && k % 2 == 0) return std::nullopt;
  mpz_class r;
  mpz_class a = abs(n);
  if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), k) == 0) return std::nullopt;
  if (n < 0) r = -r;
  return r;
}

std::optional<mpq_class> rational_root(const mpq_class& q, unsigned long k) {
  auto num = exact_root(q.get_num(), k);
  auto den = exact_root(q.get_den(), k);
  if (!num || !den) return std::nullopt;
  mpq_class r(*num, *den);
  r.canonicalize();
  return r;
}

double log_abs(const mpz_class& n) {
  if (n == 0) throw PreconditionViolated("log of zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

std::size_t bit_size(const mpz_class& n) { return n == 0 ? 1 : mpz_sizeinbase(n.get_mpz_t(), 2); }

std::size_t bit_size(const mpq_class& q) { return bit_size(q.get_num()) + bit_size(q.get_den()); }

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (text.empty() || text.find_first_of(".eE ") != std::string::npos ||
      q.set_str(text, 10) != 0) {
    throw ParseError("malformed rational '" + text + "'", 1, 1);
  }
  if (q.get_den() == 0) throw DivisionByZero("rational '" + text + "' has zero denominator");
  q.canonicalize();
  return q;
}

std::string to_string(const mpz_class& n) { return n.get_str(); }

std::string to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace splitdyn
