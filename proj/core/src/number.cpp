#include "trilin/number.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "trilin/errors.hpp"

namespace trilin {

Rational make_rational(long num, long den) {
  if (den == 0) throw DivisionByZero();
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw Error("empty rational literal");
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t decimals = text.size() - dot - 1;
    Integer num(digits, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(text, 10) != 0) throw Error("malformed rational literal '" + text + "'");
  if (r.get_den() == 0) throw DivisionByZero();
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

bool is_integer(const Rational& value) { return value.get_den() == 1; }

Integer floor_of(const Rational& value) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

Rational pow_int(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent < 0) throw DivisionByZero();
    return Rational(0);
  }
  const unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                       : static_cast<unsigned long>(exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r = exponent < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

std::size_t hash_of(const Rational& value) {
  const std::size_t h1 = std::hash<std::string>{}(value.get_num().get_str(16));
  const std::size_t h2 = std::hash<std::string>{}(value.get_den().get_str(16));
  return h1 * 1000003u ^ h2;
}

std::vector<std::pair<Integer, long>> factor_integer(const Integer& n) {
  std::vector<std::pair<Integer, long>> out;
  Integer m = abs(n);
  if (m < 2) return out;
  auto take = [&](const Integer& prime) {
    long count = 0;
    while (mpz_divisible_p(m.get_mpz_t(), prime.get_mpz_t())) {
      m /= prime;
      ++count;
    }
    if (count > 0) out.emplace_back(prime, count);
  };
  take(Integer(2));
  take(Integer(3));
  // 6k +- 1 wheel up to the trial bound
  constexpr unsigned long kTrialBound = 1000000;
  for (unsigned long d = 5; d <= kTrialBound; d += 6) {
    if (Integer(d) * d > m) break;
    take(Integer(d));
    take(Integer(d + 2));
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

std::optional<Integer> exact_root(const Integer& n, unsigned long k) {
  if (n < 0) return std::nullopt;
  Integer r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}

std::optional<Rational> exact_root(const Rational& q, unsigned long k) {
  const bool negative = q < 0;
  if (negative && k % 2 == 0) return std::nullopt;
  const Integer num = abs(q.get_num());
  auto rn = exact_root(num, k);
  auto rd = exact_root(q.get_den(), k);
  if (!rn || !rd) return std::nullopt;
  Rational r(*rn, *rd);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

long double to_long_double(const Rational& value) {
  // hi + lo split keeps more mantissa bits than a single double conversion.
  const double hi = value.get_d();
  const Rational rest = value - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

}  // namespace trilin
