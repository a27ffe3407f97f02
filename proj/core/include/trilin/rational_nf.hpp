#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trilin/expr.hpp"
#include "trilin/poly.hpp"

namespace trilin {

// Product of radical bases raised to exponents in (0, 1), sorted by base index.
using RadicalKey = std::vector<std::pair<std::size_t, Rational>>;

// sum_k num[k] * radical(k) / den with gcd(all num, den) = 1 and lc(den) = 1.
struct RationalNF {
  std::map<RadicalKey, Poly> num;
  Poly den = Poly(Rational(1));

  bool is_zero() const { return num.empty(); }
  bool is_rational() const { return num.empty() || (num.size() == 1 && num.begin()->first.empty()); }
};

// Converts expressions into normal forms over one shared ring. Ring variables
// are symbols, followed by atoms (function nodes and radicals the form cannot
// represent). Radical bases are primes or primitive polynomials.
class NFConverter {
 public:
  NFConverter() = default;
  // Registers symbols first so that the variable order is canonical.
  explicit NFConverter(const std::set<std::string>& symbols);

  RationalNF convert(const Expr& e);
  Expr to_expr(const RationalNF& nf) const;
  Expr poly_to_expr(const Poly& p) const;

  RationalNF constant(const Rational& c) const;
  RationalNF from_poly(Poly p) const;
  RationalNF add(const RationalNF& a, const RationalNF& b) const;
  RationalNF sub(const RationalNF& a, const RationalNF& b) const;
  RationalNF mul(const RationalNF& a, const RationalNF& b);
  RationalNF inverse(const RationalNF& a);
  RationalNF pow(const RationalNF& a, long n);
  // Fractional power; nullopt when the result is not representable.
  std::optional<RationalNF> root_power(const RationalNF& a, const Rational& r);

  std::size_t variable(const Expr& symbol_or_atom);
  std::optional<std::size_t> find_variable(const Expr& symbol_or_atom) const;
  const std::vector<Expr>& variables() const { return vars_; }

  bool has_atoms() const { return atoms_ > 0; }
  // True when some radical base is a polynomial rather than a prime.
  bool has_polynomial_radicals() const;
  // Zero and non-zero decisions are both exact for this ring.
  bool exact() const { return !has_atoms() && !has_polynomial_radicals(); }

 private:
  struct Base {
    bool numeric = true;
    Integer prime;
    Poly poly;
  };

  RationalNF convert_power(const Expr& e);
  RationalNF atom(const Expr& e);
  RationalNF power_of_base(std::size_t base, const Rational& e);
  std::optional<RationalNF> power_of_poly(const Poly& p, const Rational& r);
  std::optional<RationalNF> power_of_rational(const Rational& c, const Rational& r);
  std::size_t base_index(const Poly& p);
  std::size_t prime_index(const Integer& prime);
  RationalNF reduce(RationalNF nf) const;
  Expr radical_expr(const RadicalKey& key) const;

  std::vector<Expr> vars_;
  std::map<Expr, std::size_t, ExprLess> index_;
  std::vector<Base> bases_;
  std::size_t atoms_ = 0;
};

// Rational-function ("together") form of e: one numerator over one
// denominator, common factors cancelled. Falls back to normalize() when e
// cannot be represented.
Expr simplify(const Expr& e);

enum class NFZero { Zero, NonZero, Unknown };

// Exact zero decision through the normal form. NonZero is reported only
// when the ring has no atoms and no polynomial radicals.
NFZero nf_zero_test(const Expr& e);

// Numerator and denominator polynomials of a rational expression as
// expressions; throws NotPolynomialInJetVars if e contains radicals or atoms
// that do not cancel.
std::pair<Expr, Expr> numerator_denominator(const Expr& e);

}  // namespace trilin
