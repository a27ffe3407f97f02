#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trilin {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

// Accepts "a", "-a", "a/b" and decimal literals such as "2.25".
Rational parse_rational(const std::string& text);

// Always "a" or "a/b", never a decimal.
std::string to_string(const Rational& value);

bool is_integer(const Rational& value);
Integer floor_of(const Rational& value);
Rational pow_int(const Rational& base, long exponent);
std::size_t hash_of(const Rational& value);

// Prime factorisation of |n| by trial division. A cofactor that survives the
// trial bound is reported as if it were prime.
std::vector<std::pair<Integer, long>> factor_integer(const Integer& n);

// Exact k-th root of a non-negative integer, if it exists.
std::optional<Integer> exact_root(const Integer& n, unsigned long k);

// Exact k-th root of a rational (real branch for odd k).
std::optional<Rational> exact_root(const Rational& q, unsigned long k);

long double to_long_double(const Rational& value);

}  // namespace trilin
