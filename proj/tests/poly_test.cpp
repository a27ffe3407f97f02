#include <gtest/gtest.h>

#include <random>

#include "trilin/poly.hpp"

namespace trilin {
namespace {

Poly var(std::size_t i, int power = 1) { return Poly::variable(i, power); }
Poly c(long n) { return Poly(Rational(n)); }

TEST(Poly, ArithmeticAndOrdering) {
  Poly a = var(0) + var(1);
  Poly b = a * a;
  EXPECT_EQ(b, var(0, 2) + c(2) * var(0) * var(1) + var(1, 2));
  EXPECT_EQ(b.leading_term().mono, (Monomial{2}));
  EXPECT_EQ(b.total_degree(), 2);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(a.pow(3).size(), 4U);
}

TEST(Poly, GradedLexOrder) {
  EXPECT_GT(compare_grlex({0, 2}, {1}), 0);
  EXPECT_GT(compare_grlex({1, 1}, {0, 2}), 0);
  EXPECT_EQ(compare_grlex({1, 1}, {1, 1}), 0);
}

TEST(Poly, ExactDivision) {
  Poly a = var(0, 2) - var(1, 2);
  auto q = a.divide_exact(var(0) - var(1));
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, var(0) + var(1));
  EXPECT_FALSE(a.divide_exact(var(0) + c(1)).has_value());
}

TEST(Poly, PrimitiveAndContent) {
  Poly a = Poly(Rational(2, 3)) * var(0) - Poly(Rational(4, 3));
  EXPECT_EQ(a.primitive(), var(0) - c(2));
  EXPECT_EQ(a.rational_content(), Rational(2, 3));
  EXPECT_EQ((var(0, 2) * var(1) + var(0) * var(1, 3)).monomial_content(), (Monomial{1, 1}));
}

TEST(Poly, CoefficientsRoundTrip) {
  Poly a = var(0, 2) * var(1) + var(1) + c(3) * var(0);
  std::vector<Poly> coeffs = a.coefficients_in(0);
  ASSERT_EQ(coeffs.size(), 3U);
  EXPECT_EQ(coeffs[0], var(1));
  EXPECT_EQ(Poly::from_coefficients(0, coeffs), a);
}

TEST(Poly, Evaluate) {
  Poly a = var(0, 2) * var(1) - c(1);
  EXPECT_EQ(a.evaluate({Rational(2), Rational(3)}), Rational(11));
}

TEST(Gcd, Univariate) {
  Poly a = (var(0) - c(1)) * (var(0) + c(2));
  Poly b = (var(0) - c(1)) * (var(0) - c(5));
  EXPECT_EQ(gcd(a, b), var(0) - c(1));
  EXPECT_EQ(gcd(a, var(0) + c(7)), c(1));
  EXPECT_EQ(gcd(a, Poly()), a.primitive());
}

TEST(Gcd, LargeCoefficients) {
  Poly big = var(0) * Poly(Rational(Integer("123456789012345678901234567890"))) + c(7);
  Poly a = big * (var(0, 3) + c(2));
  Poly b = big * (var(0, 2) - c(3));
  EXPECT_EQ(gcd(a, b), big.primitive());
}

TEST(Gcd, MonomialContent) {
  Poly a = var(0, 3) * var(1);
  Poly b = var(0, 2) * var(1, 2);
  EXPECT_EQ(gcd(a, b), var(0, 2) * var(1));
}

TEST(Gcd, Multivariate) {
  Poly g = var(0) * var(1) + var(2, 2) - c(3);
  Poly a = g * (var(0, 2) + var(1) + c(1));
  Poly b = g * (var(1) * var(2) - var(0) + c(4));
  EXPECT_EQ(gcd(a, b), g.primitive());
  EXPECT_EQ(lcm(var(0) * var(1), var(1) * var(2)), var(0) * var(1) * var(2));
}

TEST(Gcd, RandomProductsRecoverTheCommonFactor) {
  std::mt19937_64 rng(3);
  auto coef = [&] { return std::uniform_int_distribution<long>(-9, 9)(rng); };
  auto random_poly = [&](int terms) {
    Poly out;
    for (int i = 0; i < terms; ++i) {
      Monomial m;
      for (std::size_t v = 0; v < 4; ++v) m.push_back(std::uniform_int_distribution<int>(0, 2)(rng));
      while (!m.empty() && m.back() == 0) m.pop_back();
      out += Poly::monomial(m, Rational(coef()));
    }
    return out;
  };
  for (int i = 0; i < 20; ++i) {
    Poly g = random_poly(3);
    Poly f1 = random_poly(3);
    Poly f2 = random_poly(3);
    if (g.is_zero() || f1.is_zero() || f2.is_zero()) continue;
    Poly a = g * f1;
    Poly b = g * f2;
    Poly h = gcd(a, b);
    EXPECT_TRUE(a.divide_exact(h).has_value());
    EXPECT_TRUE(b.divide_exact(h).has_value());
    EXPECT_TRUE(h.divide_exact(g.primitive()).has_value());
  }
}

TEST(Poly, ExactRoot) {
  Poly a = var(0) * var(1) + c(2);
  auto r = exact_root(a.pow(3), 3);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->primitive(), a.primitive());
  EXPECT_FALSE(exact_root(a.pow(2) + c(1), 2).has_value());
}

}  // namespace
}  // namespace trilin
