#pragma once

// Integer and rational helpers on top of GMP.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace splitdyn {

/// Prime factorisation as (prime, exponent) pairs in increasing prime order.
/// Trial division followed by Pollard-Brent on the cofactor. |n| must be > 0.
std::vector<std::pair<mpz_class, int>> factor_integer(mpz_class n);

/// All positive divisors of |n|, sorted. n != 0.
std::vector<mpz_class> divisors(const mpz_class& n);

bool is_prime(const mpz_class& n);

/// p-adic valuation of n != 0.
int valuation(mpz_class n, const mpz_class& p);

/// Exact k-th root of an integer, if one exists (negative n allowed for odd k).
std::optional<mpz_class> exact_root(const mpz_class& n, unsigned long k);

/// Exact k-th root of a rational, if one exists in Q. For even k the positive root.
std::optional<mpq_class> rational_root(const mpq_class& q, unsigned long k);

/// Natural log of |n| for n != 0, accurate for integers of any size.
double log_abs(const mpz_class& n);

std::size_t bit_size(const mpz_class& n);
std::size_t bit_size(const mpq_class& q);

/// Parses "p", "-p" or "p/q" into a canonical rational; throws ParseError.
mpq_class parse_rational(const std::string& text);

std::string to_string(const mpz_class& n);
std::string to_string(const mpq_class& q);

}  // namespace splitdyn
