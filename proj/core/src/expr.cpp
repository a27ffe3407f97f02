#include "trilin/expr.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "trilin/errors.hpp"

namespace trilin {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

struct NodeFactory {
  static Expr make(Kind kind, Rational number, std::string name, std::vector<Expr> ops) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    std::size_t h = static_cast<std::size_t>(kind) * 0x100000001b3ULL;
    switch (kind) {
      case Kind::Rational:
        h = mix(h, hash_of(number));
        break;
      case Kind::Symbol:
      case Kind::Function:
        h = mix(h, std::hash<std::string>{}(name));
        break;
      case Kind::Power:
        h = mix(h, hash_of(number));
        break;
      default:
        break;
    }
    for (const auto& op : ops) h = mix(h, op.hash());
    node->hash = h;
    node->number = std::move(number);
    node->name = std::move(name);
    node->ops = std::move(ops);
    return Expr(std::shared_ptr<const Node>(std::move(node)));
  }

  static Expr rational(Rational value) {
    value.canonicalize();
    return make(Kind::Rational, value, {}, {});
  }
  static Expr power(const Expr& base, const Rational& exponent) {
    return make(Kind::Power, exponent, {}, {base});
  }
  static Expr product(std::vector<Expr> factors) {
    return make(Kind::Product, Rational(0), {}, std::move(factors));
  }
  static Expr sum(std::vector<Expr> terms) {
    return make(Kind::Sum, Rational(0), {}, std::move(terms));
  }
  static Expr function(std::string name, const Expr& arg) {
    return make(Kind::Function, Rational(0), std::move(name), {arg});
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = NodeFactory::rational(Rational(0));
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}
Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}
Expr::Expr(const Rational& value) : node_(NodeFactory::rational(value).node_) {}

Expr Expr::symbol(std::string_view name) {
  if (name.empty()) throw Error("empty symbol name");
  return NodeFactory::make(Kind::Symbol, Rational(0), std::string(name), {});
}

Kind Expr::kind() const noexcept { return node_->kind; }

bool Expr::is_literal_zero() const noexcept {
  return node_->kind == Kind::Rational && sgn(node_->number) == 0;
}

bool Expr::is_literal_one() const noexcept {
  return node_->kind == Kind::Rational && node_->number == 1;
}

const Rational& Expr::value() const {
  if (node_->kind != Kind::Rational) throw Error("value() on a non-rational expression");
  return node_->number;
}

const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::operands() const { return node_->ops; }

const Expr& Expr::base() const {
  if (node_->kind != Kind::Power) throw Error("base() on a non-power expression");
  return node_->ops[0];
}

const Rational& Expr::exponent() const {
  if (node_->kind != Kind::Power) throw Error("exponent() on a non-power expression");
  return node_->number;
}

const Expr& Expr::argument() const {
  if (node_->kind != Kind::Function) throw Error("argument() on a non-function expression");
  return node_->ops[0];
}

std::size_t Expr::hash() const noexcept { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  return compare(a, b) == 0;
}

int symbol_rank(std::string_view name) {
  static const std::array<std::string_view, 8> order = {"x",    "u",    "p",    "q",
                                                        "xbar", "ubar", "pbar", "qbar"};
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == name) return static_cast<int>(i);
  }
  return static_cast<int>(order.size());
}

int compare_symbol_names(std::string_view a, std::string_view b) {
  int ra = symbol_rank(a);
  int rb = symbol_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

namespace {

int cmp_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

const Expr& factor_base(const Expr& e) { return e.is(Kind::Power) ? e.base() : e; }

Rational factor_exponent(const Expr& e) {
  return e.is(Kind::Power) ? e.exponent() : Rational(1);
}

// Factors are ordered by base, then exponent, with the coefficient first.
bool factor_less(const Expr& a, const Expr& b) {
  if (a.is_rational() != b.is_rational()) return a.is_rational();
  int c = compare(factor_base(a), factor_base(b));
  if (c != 0) return c < 0;
  return cmp_rational(factor_exponent(a), factor_exponent(b)) < 0;
}

// Terms are ordered by their non-numeric part, constants first.
bool term_less(const Expr& a, const Expr& b) {
  if (a.is_rational() != b.is_rational()) return a.is_rational();
  auto [ca, ra] = split_coefficient(a);
  auto [cb, rb] = split_coefficient(b);
  int c = compare(ra, rb);
  if (c != 0) return c < 0;
  return cmp_rational(ca, cb) < 0;
}

Expr product_of(const Rational& coef, std::vector<Expr> factors) {
  if (sgn(coef) == 0) return Expr(0);
  if (factors.empty()) return Expr(coef);
  std::sort(factors.begin(), factors.end(), factor_less);
  if (coef == 1 && factors.size() == 1) return factors.front();
  if (coef != 1) factors.insert(factors.begin(), Expr(coef));
  return NodeFactory::product(std::move(factors));
}

Expr with_coefficient(const Rational& c, const Expr& rest) {
  if (sgn(c) == 0) return Expr(0);
  if (c == 1) return rest;
  if (rest.is_literal_one()) return Expr(c);
  if (rest.is(Kind::Product)) {
    std::vector<Expr> factors;
    factors.reserve(rest.operands().size() + 1);
    factors.emplace_back(c);
    factors.insert(factors.end(), rest.operands().begin(), rest.operands().end());
    return NodeFactory::product(std::move(factors));
  }
  return NodeFactory::product({Expr(c), rest});
}

bool is_prime_radical(const Expr& e) { return e.is(Kind::Power) && e.base().is_rational(); }

Expr numeric_power(const Rational& q, const Rational& e) {
  if (is_integer(e)) {
    long n = e.get_num().get_si();
    if (sgn(q) == 0) {
      if (n < 0) throw DivisionByZero("zero raised to a negative power");
      return Expr(n == 0 ? 1 : 0);
    }
    return Expr(pow_int(q, n));
  }
  if (sgn(q) == 0) {
    if (sgn(e) < 0) throw DivisionByZero("zero raised to a negative power");
    return Expr(0);
  }
  if (q == 1) return Expr(1);
  Integer den_e = e.get_den();
  Integer num_e = e.get_num();
  Rational base = q;
  Rational coef = 1;
  if (sgn(base) < 0) {
    if (den_e % 2 == 0) return NodeFactory::power(Expr(q), e);
    base = -base;
    if (num_e % 2 != 0) coef = -1;
  }
  std::vector<Expr> radicals;
  auto absorb = [&](const Integer& n, long sign) {
    for (const auto& [prime, k] : factor_integer(n)) {
      Rational t = Rational(sign * k) * e;
      Integer fl = floor_of(t);
      Rational frac = t - Rational(fl);
      coef *= pow_int(Rational(prime), fl.get_si());
      if (sgn(frac) != 0) radicals.push_back(NodeFactory::power(Expr(Rational(prime)), frac));
    }
  };
  absorb(base.get_num(), 1);
  absorb(base.get_den(), -1);
  return product_of(coef, std::move(radicals));
}

bool odd_denominator(const Rational& r) { return r.get_den() % 2 != 0; }

bool even_integer(const Rational& r) { return is_integer(r) && r.get_num() % 2 == 0; }

Expr power_of_power(const Expr& inner, const Rational& e) {
  const Expr& g = inner.base();
  const Rational& a = inner.exponent();
  bool combine = is_integer(e) || (is_integer(a) && odd_denominator(e)) ||
                 (!odd_denominator(a)) || (even_integer(a) && even_integer(a * e)) ||
                 (odd_denominator(a) && odd_denominator(e) && !is_integer(a));
  if (combine) return make_power(g, a * e);
  return NodeFactory::power(inner, e);
}

Expr power_of_product(const Expr& prod, const Rational& e) {
  if (is_integer(e) || odd_denominator(e)) {
    std::vector<Expr> parts;
    parts.reserve(prod.operands().size());
    for (const auto& f : prod.operands()) parts.push_back(make_power(f, e));
    return make_product(std::move(parts));
  }
  std::vector<Expr> extracted;
  std::vector<Expr> kept;
  for (const auto& f : prod.operands()) {
    if (f.is_rational()) {
      if (sgn(f.value()) > 0) {
        extracted.push_back(numeric_power(f.value(), e));
      } else if (f.value() != -1) {
        extracted.push_back(numeric_power(-f.value(), e));
        kept.emplace_back(-1);
      } else {
        kept.push_back(f);
      }
    } else if (is_prime_radical(f) || (f.is(Kind::Power) && !odd_denominator(f.exponent()))) {
      extracted.push_back(make_power(f.base(), f.exponent() * e));
    } else if (f.is(Kind::Power) && even_integer(f.exponent()) &&
               even_integer(f.exponent() * e)) {
      extracted.push_back(make_power(f.base(), f.exponent() * e));
    } else {
      kept.push_back(f);
    }
  }
  if (kept.empty()) return make_product(std::move(extracted));
  Expr rest = kept.size() == 1 ? kept.front() : make_product(kept);
  Expr raw = rest.is(Kind::Product) ? NodeFactory::power(rest, e) : make_power(rest, e);
  if (extracted.empty()) return raw;
  extracted.push_back(raw);
  return make_product(std::move(extracted));
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  Kind ka = a.kind();
  Kind kb = b.kind();
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (ka) {
    case Kind::Rational:
      return cmp_rational(a.value(), b.value());
    case Kind::Symbol:
      return compare_symbol_names(a.name(), b.name());
    case Kind::Power: {
      int c = compare(a.base(), b.base());
      if (c != 0) return c;
      return cmp_rational(a.exponent(), b.exponent());
    }
    case Kind::Product:
    case Kind::Sum:
      return compare_lists(a.operands(), b.operands());
    case Kind::Function: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      return compare(a.argument(), b.argument());
    }
  }
  return 0;
}

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
  if (e.is_rational()) return {e.value(), Expr(1)};
  if (e.is(Kind::Product) && e.operands().front().is_rational()) {
    const auto& ops = e.operands();
    if (ops.size() == 2) return {ops[0].value(), ops[1]};
    return {ops[0].value(), NodeFactory::product(std::vector<Expr>(ops.begin() + 1, ops.end()))};
  }
  return {Rational(1), e};
}

Expr make_sum(std::vector<Expr> terms) {
  Rational constant = 0;
  std::map<Expr, Rational, ExprLess> acc;
  std::vector<Expr> work = std::move(terms);
  while (!work.empty()) {
    Expr t = std::move(work.back());
    work.pop_back();
    if (t.is(Kind::Sum)) {
      work.insert(work.end(), t.operands().begin(), t.operands().end());
    } else if (t.is_rational()) {
      constant += t.value();
    } else {
      auto [c, rest] = split_coefficient(t);
      acc[rest] += c;
    }
  }
  std::vector<Expr> out;
  bool nested = false;
  if (sgn(constant) != 0) out.emplace_back(constant);
  for (const auto& [rest, c] : acc) {
    if (sgn(c) == 0) continue;
    Expr term = with_coefficient(c, rest);
    if (term.is(Kind::Sum)) nested = true;
    out.push_back(std::move(term));
  }
  if (nested) return make_sum(std::move(out));
  if (out.empty()) return Expr(0);
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), term_less);
  return NodeFactory::sum(std::move(out));
}

Expr make_product(std::vector<Expr> factors) {
  std::vector<Expr> current = std::move(factors);
  for (int round = 0;; ++round) {
    Rational coef = 1;
    std::map<Expr, Rational, ExprLess> powers;
    std::vector<Expr> work = std::move(current);
    while (!work.empty()) {
      Expr f = std::move(work.back());
      work.pop_back();
      switch (f.kind()) {
        case Kind::Rational:
          coef *= f.value();
          if (sgn(coef) == 0) return Expr(0);
          break;
        case Kind::Product:
          work.insert(work.end(), f.operands().begin(), f.operands().end());
          break;
        case Kind::Power:
          powers[f.base()] += f.exponent();
          break;
        default:
          powers[f] += 1;
          break;
      }
    }
    std::vector<Expr> next;
    bool again = false;
    for (const auto& [b, e] : powers) {
      if (sgn(e) == 0) continue;
      Expr r = make_power(b, e);
      if (r.is_rational()) {
        coef *= r.value();
      } else if (r.is(Kind::Product)) {
        again = true;
        next.insert(next.end(), r.operands().begin(), r.operands().end());
      } else {
        next.push_back(std::move(r));
      }
    }
    if (sgn(coef) == 0) return Expr(0);
    if (!again || round > 16) return product_of(coef, std::move(next));
    next.emplace_back(coef);
    current = std::move(next);
  }
}

Expr make_power(const Expr& base, const Rational& exponent) {
  if (sgn(exponent) == 0) {
    if (base.is_literal_zero()) throw DomainError("0^0 is undefined");
    return Expr(1);
  }
  if (exponent == 1) return base;
  switch (base.kind()) {
    case Kind::Rational:
      return numeric_power(base.value(), exponent);
    case Kind::Power:
      if (is_prime_radical(base)) {
        Rational t = base.exponent() * exponent;
        return numeric_power(base.base().value(), t);
      }
      return power_of_power(base, exponent);
    case Kind::Product:
      return power_of_product(base, exponent);
    default:
      return NodeFactory::power(base, exponent);
  }
}

bool is_known_function(std::string_view name) {
  return name == "exp" || name == "ln" || name == "log" || name == "sin" || name == "cos" ||
         name == "sqrt" || name == "cbrt";
}

Expr make_function(std::string_view name, const Expr& argument) {
  if (name == "sqrt") return make_power(argument, Rational(1, 2));
  if (name == "cbrt") return make_power(argument, Rational(1, 3));
  if (name == "log") return make_function("ln", argument);
  if (name == "exp") {
    if (argument.is_literal_zero()) return Expr(1);
    if (argument.is(Kind::Function) && argument.name() == "ln") return argument.argument();
  } else if (name == "ln") {
    if (argument.is_literal_one()) return Expr(0);
    if (argument.is(Kind::Function) && argument.name() == "exp") return argument.argument();
    if (argument.is_literal_zero() || (argument.is_rational() && sgn(argument.value()) < 0)) {
      throw DomainError("logarithm of a non-positive number");
    }
  } else if (name == "sin") {
    if (argument.is_literal_zero()) return Expr(0);
  } else if (name == "cos") {
    if (argument.is_literal_zero()) return Expr(1);
  } else {
    throw UnsupportedNode("unsupported function '" + std::string(name) + "'");
  }
  return NodeFactory::function(std::string(name), argument);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_literal_zero()) return b;
  if (b.is_literal_zero()) return a;
  return make_sum({a, b});
}

Expr operator-(const Expr& a) {
  if (a.is_rational()) return Expr(Rational(-a.value()));
  return make_product({Expr(-1), a});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_literal_zero()) return a;
  return make_sum({a, -b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_literal_one()) return b;
  if (b.is_literal_one()) return a;
  return make_product({a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_literal_zero()) throw DivisionByZero("division by zero");
  if (b.is_literal_one()) return a;
  return make_product({a, make_power(b, Rational(-1))});
}

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Rational& exponent) { return make_power(base, exponent); }
Expr pow(const Expr& base, long exponent) { return make_power(base, Rational(exponent)); }
Expr sqrt(const Expr& e) { return make_power(e, Rational(1, 2)); }
Expr cbrt(const Expr& e) { return make_power(e, Rational(1, 3)); }
Expr exp(const Expr& e) { return make_function("exp", e); }
Expr ln(const Expr& e) { return make_function("ln", e); }
Expr sin(const Expr& e) { return make_function("sin", e); }
Expr cos(const Expr& e) { return make_function("cos", e); }

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& op : e.operands()) collect_symbols(op, out);
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view symbol) {
  if (e.is_symbol()) return e.name() == symbol;
  for (const auto& op : e.operands()) {
    if (depends_on(op, symbol)) return true;
  }
  return false;
}

bool contains_function(const Expr& e) {
  if (e.is(Kind::Function)) return true;
  for (const auto& op : e.operands()) {
    if (contains_function(op)) return true;
  }
  return false;
}

bool contains_radical(const Expr& e) {
  if (e.is(Kind::Power) && !is_integer(e.exponent())) return true;
  for (const auto& op : e.operands()) {
    if (contains_radical(op)) return true;
  }
  return false;
}

std::size_t tree_size(const Expr& e) {
  std::size_t n = 1;
  for (const auto& op : e.operands()) n += tree_size(op);
  return n;
}

}  // namespace trilin
