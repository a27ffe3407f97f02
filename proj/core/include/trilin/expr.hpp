#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trilin/number.hpp"

namespace trilin {

enum class Kind : std::uint8_t { Rational, Symbol, Power, Product, Sum, Function };

struct Node;

// Immutable expression over exact rationals. Every constructor returns the
// automatically simplified form: sums and products are flattened, sorted and
// constant-folded, like bases are merged, and numeric radicals are reduced to
// products of prime roots with exponents in (0, 1).
//
// Expansion (distribution of products over sums) is not automatic; see
// normalize().
class Expr {
 public:
  Expr();
  Expr(int value);   // NOLINT(google-explicit-constructor)
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr symbol(std::string_view name);

  Kind kind() const noexcept;
  bool is(Kind k) const noexcept { return kind() == k; }
  bool is_rational() const noexcept { return kind() == Kind::Rational; }
  bool is_symbol() const noexcept { return kind() == Kind::Symbol; }
  bool is_literal_zero() const noexcept;
  bool is_literal_one() const noexcept;

  // Rational value; valid for Kind::Rational.
  const Rational& value() const;
  // Symbol or function name.
  const std::string& name() const;
  // Sum terms, product factors, {base} for powers, {argument} for functions.
  const std::vector<Expr>& operands() const;
  const Expr& base() const;
  const Rational& exponent() const;
  const Expr& argument() const;

  std::size_t hash() const noexcept;
  const Node* node() const noexcept { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  friend struct NodeFactory;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind;
  std::size_t hash;
  Rational number;  // Rational value or Power exponent
  std::string name;
  std::vector<Expr> ops;
};

// Total order used for canonical sorting.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

// Jet coordinates come first, then barred coordinates, then everything else
// alphabetically.
int symbol_rank(std::string_view name);
int compare_symbol_names(std::string_view a, std::string_view b);

Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, const Rational& exponent);
Expr make_function(std::string_view name, const Expr& argument);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Rational& exponent);
Expr pow(const Expr& base, long exponent);
Expr sqrt(const Expr& e);
Expr cbrt(const Expr& e);
Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);

bool is_known_function(std::string_view name);

// Splits c*rest with rational c.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

std::set<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, std::string_view symbol);
bool contains_function(const Expr& e);
bool contains_radical(const Expr& e);

// Canonical form: automatic simplification followed by full expansion of
// products and non-negative integer powers of sums. Idempotent.
Expr normalize(const Expr& e);

// Symbols that stand for unknown functions and their partial derivatives.
// An unknown H(x,u) owns the symbols H, H_x, H_u, H_xu, H_uu, ...; the suffix
// lists the differentiation variables in argument order.
class Placeholders {
 public:
  void declare(const std::string& unknown, std::vector<std::string> args);
  bool declared(const std::string& unknown) const;
  const std::vector<std::string>& args(const std::string& unknown) const;
  std::vector<std::string> unknowns() const;

  struct Decoded {
    std::string unknown;
    std::vector<int> orders;  // one entry per declared argument
  };
  std::optional<Decoded> decode(const std::string& symbol) const;
  std::string encode(const std::string& unknown, const std::vector<int>& orders) const;
  Expr symbol(const std::string& unknown) const { return Expr::symbol(unknown); }

  // Symbol for d(symbol)/d(var), or nullopt when it does not depend on var.
  std::optional<std::string> derivative(const std::string& symbol, const std::string& var) const;

 private:
  std::map<std::string, std::vector<std::string>> args_;
};

// Exact partial derivative, normalized.
Expr diff(const Expr& e, std::string_view var, const Placeholders* unknowns = nullptr);
// Partial derivative without the final expansion.
Expr diff_raw(const Expr& e, std::string_view var, const Placeholders* unknowns = nullptr);

using Bindings = std::map<std::string, Expr>;

// Simultaneous substitution, then normalize.
Expr substitute(const Expr& e, const Bindings& bindings);
Expr substitute_raw(const Expr& e, const Bindings& bindings);

// Rewrites powers assuming every symbol is positive:
// (b^a)^r -> b^(a r) and (prod)^r -> prod of powers for any rational r.
Expr assume_positive(const Expr& e);

std::size_t tree_size(const Expr& e);

}  // namespace trilin
