#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trilin/number.hpp"

namespace trilin {

// Exponent vector with trailing zeros trimmed; variables are ring indices.
using Monomial = std::vector<int>;

int monomial_degree(const Monomial& m);
int monomial_exponent(const Monomial& m, std::size_t var);
// Graded lexicographic comparison, variable 0 highest.
int compare_grlex(const Monomial& a, const Monomial& b);
Monomial monomial_mul(const Monomial& a, const Monomial& b);
std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b);
Monomial monomial_min(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

// Sparse multivariate polynomial over Q, terms sorted by descending grlex.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly constant(const Rational& c) { return Poly(c); }
  static Poly variable(std::size_t var, int power = 1);
  static Poly monomial(Monomial m, Rational c);
  static Poly from_terms(std::vector<Term> terms);

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  bool is_one() const noexcept;
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  const Term& leading_term() const;
  const Rational& leading_coefficient() const { return leading_term().coef; }
  Rational constant_term() const;

  int degree(std::size_t var) const;
  int total_degree() const;
  int min_total_degree() const;
  bool uses(std::size_t var) const { return degree(var) > 0; }
  std::vector<std::size_t> variables() const;
  // Componentwise minimum over all terms.
  Monomial monomial_content() const;
  // Positive rational c with this/c an integer polynomial with coprime coefficients.
  Rational rational_content() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(unsigned long n) const;
  Poly mul_monomial(const Monomial& m, const Rational& c) const;
  // Exact quotient, or nullopt when d does not divide this.
  std::optional<Poly> divide_exact(const Poly& d) const;
  Poly divide_monomial(const Monomial& m) const;

  // Coefficients with respect to var, indexed by degree.
  std::vector<Poly> coefficients_in(std::size_t var) const;
  static Poly from_coefficients(std::size_t var, const std::vector<Poly>& coeffs);

  // Integer coefficients, coprime, positive leading coefficient.
  Poly primitive() const;
  Poly monic() const;

  Rational evaluate(const std::vector<Rational>& point) const;
  std::size_t hash() const;

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);

// Exact k-th root, if p is a perfect k-th power over Q.
std::optional<Poly> exact_root(const Poly& p, unsigned long k);

}  // namespace trilin
