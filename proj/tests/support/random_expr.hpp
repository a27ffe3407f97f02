#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "trilin/expr.hpp"
#include "trilin/jet.hpp"

namespace trilin::testing {

inline const std::vector<std::string> kJetVars = {"x", "u", "p", "q"};

// Seeded generator of random expression trees over x, u, p, q.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational small_rational() {
    long num = integer(-5, 5);
    if (num == 0) num = 1;
    return Rational(num, integer(1, 3));
  }

  Expr symbol() { return Expr::symbol(kJetVars[static_cast<std::size_t>(integer(0, 3))]); }

  // Rational function built without expansion: sums, products, integer
  // powers in [-2, 3].
  Expr rational(int depth) {
    if (depth <= 0 || integer(0, 9) < 2) return integer(0, 2) == 0 ? Expr(small_rational()) : symbol();
    switch (integer(0, 3)) {
      case 0:
        return rational(depth - 1) + rational(depth - 1);
      case 1:
        return rational(depth - 1) * rational(depth - 1);
      case 2: {
        long e = integer(-2, 3);
        Expr base = rational(depth - 1) + Expr(small_rational());
        if (base.is_rational() && e < 0) return base;
        return pow(base, e == 0 ? 2 : e);
      }
      default:
        return rational(depth - 1) - symbol() * rational(depth - 1);
    }
  }

  // Non-zero monomial c x^a u^b p^c q^d.
  Expr monomial() {
    Expr m = Expr(small_rational());
    for (const auto& v : kJetVars) {
      long e = integer(0, 2);
      if (e > 0) m = m * pow(Expr::symbol(v), e);
    }
    return m;
  }

  // Smooth on x, u, p, q in [0.5, 2]: positive denominators, square roots of
  // positive arguments and elementary functions.
  Expr smooth(int depth) {
    if (depth <= 0 || integer(0, 9) < 2) return integer(0, 2) == 0 ? Expr(small_rational()) : symbol();
    switch (integer(0, 6)) {
      case 0:
        return smooth(depth - 1) + smooth(depth - 1);
      case 1:
        return smooth(depth - 1) * smooth(depth - 1);
      case 2:
        return pow(smooth(depth - 1), integer(2, 3));
      case 3:
        return smooth(depth - 1) / (1 + pow(smooth(depth - 1), 2));
      case 4:
        return sqrt(1 + pow(smooth(depth - 1), 2));
      case 5:
        return sin(smooth(depth - 1));
      default:
        return exp(smooth(depth - 1) / 4);
    }
  }

  long double uniform(long double lo, long double hi) {
    return std::uniform_real_distribution<long double>(lo, hi)(rng_);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace trilin::testing
