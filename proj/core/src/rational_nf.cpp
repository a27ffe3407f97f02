#include "trilin/rational_nf.hpp"

#include <algorithm>

#include "trilin/errors.hpp"

namespace trilin {

namespace {

Poly gcd_of_numerators(const RationalNF& nf, Poly g) {
  for (const auto& [key, n] : nf.num) {
    if (g.is_constant()) break;
    g = gcd(g, n);
  }
  return g;
}

void divide_all(RationalNF& nf, const Poly& g) {
  if (g.is_constant()) return;
  nf.den = *nf.den.divide_exact(g);
  for (auto& [key, n] : nf.num) n = *n.divide_exact(g);
}

void make_monic(RationalNF& nf) {
  Rational lc = nf.den.leading_coefficient();
  if (lc == 1) return;
  Rational inv = 1 / lc;
  nf.den *= inv;
  for (auto& [key, n] : nf.num) n *= inv;
}

void drop_zeros(RationalNF& nf) {
  for (auto it = nf.num.begin(); it != nf.num.end();) {
    if (it->second.is_zero()) {
      it = nf.num.erase(it);
    } else {
      ++it;
    }
  }
  if (nf.num.empty()) nf.den = Poly(Rational(1));
}

std::vector<long> divisors_descending(long d) {
  std::vector<long> out;
  for (long k = d; k >= 2; --k) {
    if (d % k == 0) out.push_back(k);
  }
  return out;
}

}  // namespace

NFConverter::NFConverter(const std::set<std::string>& symbols) {
  std::vector<std::string> sorted(symbols.begin(), symbols.end());
  std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
    return compare_symbol_names(a, b) < 0;
  });
  for (const auto& s : sorted) variable(Expr::symbol(s));
}

std::size_t NFConverter::variable(const Expr& e) {
  auto it = index_.find(e);
  if (it != index_.end()) return it->second;
  std::size_t idx = vars_.size();
  vars_.push_back(e);
  index_.emplace(e, idx);
  if (!e.is_symbol()) ++atoms_;
  return idx;
}

std::optional<std::size_t> NFConverter::find_variable(const Expr& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool NFConverter::has_polynomial_radicals() const {
  for (const auto& b : bases_) {
    if (b.numeric) continue;
    if (!(b.poly.is_monomial() && b.poly.total_degree() == 1 && b.poly.leading_coefficient() == 1)) {
      return true;
    }
  }
  return false;
}

RationalNF NFConverter::constant(const Rational& c) const {
  RationalNF nf;
  if (sgn(c) != 0) nf.num[{}] = Poly(c);
  return nf;
}

RationalNF NFConverter::from_poly(Poly p) const {
  RationalNF nf;
  if (!p.is_zero()) nf.num[{}] = std::move(p);
  return nf;
}

RationalNF NFConverter::reduce(RationalNF nf) const {
  drop_zeros(nf);
  if (nf.num.empty()) return nf;
  if (!nf.den.is_constant()) divide_all(nf, gcd_of_numerators(nf, nf.den));
  make_monic(nf);
  return nf;
}

RationalNF NFConverter::add(const RationalNF& a, const RationalNF& b) const {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  RationalNF out;
  if (a.den == b.den) {
    out.num = a.num;
    for (const auto& [key, n] : b.num) out.num[key] += n;
    out.den = a.den;
    drop_zeros(out);
    if (!out.num.empty() && !out.den.is_constant()) {
      divide_all(out, gcd_of_numerators(out, out.den));
      make_monic(out);
    }
    return out;
  }
  Poly g = gcd(a.den, b.den);
  Poly da = *a.den.divide_exact(g);
  Poly db = *b.den.divide_exact(g);
  out.den = a.den * db;
  for (const auto& [key, n] : a.num) out.num[key] = n * db;
  for (const auto& [key, n] : b.num) out.num[key] += n * da;
  drop_zeros(out);
  if (out.num.empty()) return out;
  if (!g.is_constant()) divide_all(out, gcd_of_numerators(out, g));
  make_monic(out);
  return out;
}

RationalNF NFConverter::sub(const RationalNF& a, const RationalNF& b) const {
  RationalNF nb = b;
  for (auto& [key, n] : nb.num) n = -n;
  return add(a, nb);
}

RationalNF NFConverter::mul(const RationalNF& a, const RationalNF& b) {
  if (a.is_zero() || b.is_zero()) return RationalNF{};
  Poly g1 = b.den.is_constant() ? Poly(Rational(1)) : gcd_of_numerators(a, b.den);
  Poly g2 = a.den.is_constant() ? Poly(Rational(1)) : gcd_of_numerators(b, a.den);
  std::map<RadicalKey, Poly> an;
  for (const auto& [key, n] : a.num) an[key] = g1.is_constant() ? n : *n.divide_exact(g1);
  std::map<RadicalKey, Poly> bn;
  for (const auto& [key, n] : b.num) bn[key] = g2.is_constant() ? n : *n.divide_exact(g2);
  RationalNF out;
  out.den = (g2.is_constant() ? a.den : *a.den.divide_exact(g2)) *
            (g1.is_constant() ? b.den : *b.den.divide_exact(g1));
  bool poly_carry = false;
  for (const auto& [ka, na] : an) {
    for (const auto& [kb, nb] : bn) {
      RadicalKey key;
      Rational scale = 1;
      Poly factor(Rational(1));
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ka.size() || j < kb.size()) {
        std::size_t base;
        Rational e;
        if (j == kb.size() || (i < ka.size() && ka[i].first < kb[j].first)) {
          base = ka[i].first;
          e = ka[i++].second;
        } else if (i == ka.size() || kb[j].first < ka[i].first) {
          base = kb[j].first;
          e = kb[j++].second;
        } else {
          base = ka[i].first;
          e = ka[i++].second + kb[j++].second;
        }
        if (e >= 1) {
          e -= 1;
          if (bases_[base].numeric) {
            scale *= Rational(bases_[base].prime);
          } else {
            factor *= bases_[base].poly;
            poly_carry = true;
          }
        }
        if (sgn(e) != 0) key.emplace_back(base, e);
      }
      Poly term = na * nb;
      if (!factor.is_one()) term *= factor;
      if (scale != 1) term *= scale;
      out.num[key] += term;
    }
  }
  if (poly_carry) return reduce(std::move(out));
  drop_zeros(out);
  if (!out.num.empty()) make_monic(out);
  return out;
}

RationalNF NFConverter::inverse(const RationalNF& a) {
  if (a.is_zero()) throw DivisionByZero("division by zero");
  if (a.num.size() != 1) throw UnsupportedNode("inverse of a multi-radical normal form");
  const auto& [key, n] = *a.num.begin();
  RationalNF out;
  Poly den = n;
  Rational scale = 1;
  RadicalKey inv;
  for (const auto& [base, e] : key) {
    inv.emplace_back(base, 1 - e);
    if (bases_[base].numeric) {
      scale /= Rational(bases_[base].prime);
    } else {
      den *= bases_[base].poly;
    }
  }
  out.num[inv] = a.den * scale;
  out.den = den;
  return reduce(std::move(out));
}

RationalNF NFConverter::pow(const RationalNF& a, long n) {
  if (n < 0) return pow(inverse(a), -n);
  if (n == 0) return constant(Rational(1));
  if (a.is_rational() && !a.is_zero()) {
    RationalNF out;
    auto un = static_cast<unsigned long>(n);
    out.num[{}] = a.num.begin()->second.pow(un);
    out.den = a.den.pow(un);
    make_monic(out);
    return out;
  }
  RationalNF result = constant(Rational(1));
  RationalNF base = a;
  while (n > 0) {
    if (n & 1L) result = mul(result, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

std::size_t NFConverter::base_index(const Poly& p) {
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    if (!bases_[i].numeric && bases_[i].poly == p) return i;
  }
  Base b;
  b.numeric = false;
  b.poly = p;
  bases_.push_back(std::move(b));
  return bases_.size() - 1;
}

std::size_t NFConverter::prime_index(const Integer& prime) {
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    if (bases_[i].numeric && bases_[i].prime == prime) return i;
  }
  Base b;
  b.numeric = true;
  b.prime = prime;
  bases_.push_back(std::move(b));
  return bases_.size() - 1;
}

RationalNF NFConverter::power_of_base(std::size_t base, const Rational& e) {
  Integer fl = floor_of(e);
  Rational frac = e - Rational(fl);
  long whole = fl.get_si();
  RationalNF out;
  RadicalKey key;
  if (sgn(frac) != 0) key.emplace_back(base, frac);
  const Base& b = bases_[base];
  if (b.numeric) {
    out.num[key] = Poly(pow_int(Rational(b.prime), whole));
    return out;
  }
  if (whole >= 0) {
    out.num[key] = b.poly.pow(static_cast<unsigned long>(whole));
  } else {
    out.num[key] = Poly(Rational(1));
    out.den = b.poly.pow(static_cast<unsigned long>(-whole));
  }
  return reduce(std::move(out));
}

std::optional<RationalNF> NFConverter::power_of_rational(const Rational& c, const Rational& r) {
  if (sgn(c) == 0) {
    if (sgn(r) <= 0) throw DivisionByZero("zero raised to a non-positive power");
    return RationalNF{};
  }
  if (is_integer(r)) return constant(pow_int(c, r.get_num().get_si()));
  Rational q = c;
  Rational sign = 1;
  if (sgn(q) < 0) {
    if (r.get_den() % 2 == 0) return std::nullopt;
    q = -q;
    if (r.get_num() % 2 != 0) sign = -1;
  }
  RationalNF out = constant(sign);
  for (const auto& [prime, k] : factor_integer(q.get_num())) {
    out = mul(out, power_of_base(prime_index(prime), Rational(k) * r));
  }
  for (const auto& [prime, k] : factor_integer(q.get_den())) {
    out = mul(out, power_of_base(prime_index(prime), Rational(-k) * r));
  }
  return out;
}

std::optional<RationalNF> NFConverter::power_of_poly(const Poly& p, const Rational& r) {
  if (p.is_zero()) return power_of_rational(Rational(0), r);
  if (p.is_constant()) return power_of_rational(p.leading_coefficient(), r);
  if (is_integer(r)) {
    long n = r.get_num().get_si();
    if (n >= 0) return from_poly(p.pow(static_cast<unsigned long>(n)));
    return inverse(from_poly(p.pow(static_cast<unsigned long>(-n))));
  }
  bool odd = r.get_den() % 2 != 0;
  Rational c = p.rational_content();
  if (odd && sgn(p.leading_coefficient()) < 0) c = -c;
  Poly q = p * Rational(1 / c);
  auto result = power_of_rational(c, r);
  if (!result) return std::nullopt;
  if (odd) {
    Monomial m = q.monomial_content();
    if (!m.empty()) {
      q = q.divide_monomial(m);
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (m[j] == 0) continue;
        std::size_t idx = base_index(Poly::variable(j));
        *result = mul(*result, power_of_base(idx, Rational(m[j]) * r));
      }
    }
  }
  if (q.is_constant()) {
    if (q.leading_coefficient() == 1) return result;
    return std::nullopt;
  }
  long d = r.get_den().get_si();
  for (long k : divisors_descending(d)) {
    if (auto root = exact_root(q, static_cast<unsigned long>(k))) {
      auto rest = power_of_poly(*root, r * Rational(k));
      if (!rest) return std::nullopt;
      return mul(*result, *rest);
    }
  }
  return mul(*result, power_of_base(base_index(q), r));
}

std::optional<RationalNF> NFConverter::root_power(const RationalNF& a, const Rational& r) {
  if (a.is_zero()) return power_of_rational(Rational(0), r);
  if (a.num.size() != 1) return std::nullopt;
  const auto& [key, n] = *a.num.begin();
  auto out = power_of_poly(n, r);
  if (!out) return std::nullopt;
  if (!a.den.is_one()) {
    auto d = power_of_poly(a.den, -r);
    if (!d) return std::nullopt;
    out = mul(*out, *d);
  }
  for (const auto& [base, e] : key) out = mul(*out, power_of_base(base, e * r));
  return out;
}

RationalNF NFConverter::atom(const Expr& e) {
  Expr key = e;
  if (e.is(Kind::Function)) {
    key = make_function(e.name(), simplify(e.argument()));
  } else if (e.is(Kind::Power)) {
    key = make_power(simplify(e.base()), e.exponent());
  }
  return from_poly(Poly::variable(variable(key)));
}

RationalNF NFConverter::convert_power(const Expr& e) {
  const Rational& r = e.exponent();
  if (is_integer(r)) return pow(convert(e.base()), r.get_num().get_si());
  if (e.base().is_rational()) {
    if (auto v = power_of_rational(e.base().value(), r)) return *v;
    return atom(e);
  }
  RationalNF b = convert(e.base());
  if (auto v = root_power(b, r)) return *v;
  return atom(e);
}

RationalNF NFConverter::convert(const Expr& e) {
  switch (e.kind()) {
    case Kind::Rational:
      return constant(e.value());
    case Kind::Symbol:
      return from_poly(Poly::variable(variable(e)));
    case Kind::Sum: {
      std::vector<RationalNF> groups;
      for (const auto& t : e.operands()) {
        RationalNF term = convert(t);
        if (term.is_zero()) continue;
        auto same = std::find_if(groups.begin(), groups.end(),
                                 [&](const RationalNF& g) { return g.den == term.den; });
        if (same == groups.end()) {
          groups.push_back(std::move(term));
        } else {
          for (const auto& [key, n] : term.num) same->num[key] += n;
        }
      }
      RationalNF acc;
      for (auto& g : groups) {
        drop_zeros(g);
        if (g.num.empty()) continue;
        if (!g.den.is_constant()) {
          divide_all(g, gcd_of_numerators(g, g.den));
          make_monic(g);
        }
        acc = add(acc, g);
      }
      return acc;
    }
    case Kind::Product: {
      RationalNF acc = constant(Rational(1));
      for (const auto& f : e.operands()) {
        acc = mul(acc, convert(f));
        if (acc.is_zero()) break;
      }
      return acc;
    }
    case Kind::Power:
      return convert_power(e);
    case Kind::Function:
      return atom(e);
  }
  return RationalNF{};
}

Expr NFConverter::poly_to_expr(const Poly& p) const {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    std::vector<Expr> factors{Expr(t.coef)};
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] != 0) factors.push_back(make_power(vars_.at(i), Rational(t.mono[i])));
    }
    terms.push_back(make_product(std::move(factors)));
  }
  return make_sum(std::move(terms));
}

Expr NFConverter::radical_expr(const RadicalKey& key) const {
  std::vector<Expr> factors;
  for (const auto& [base, e] : key) {
    const Base& b = bases_[base];
    Expr be = b.numeric ? Expr(Rational(b.prime)) : poly_to_expr(b.poly);
    factors.push_back(make_power(be, e));
  }
  return make_product(std::move(factors));
}

Expr NFConverter::to_expr(const RationalNF& nf) const {
  if (nf.is_zero()) return Expr(0);
  std::vector<Expr> terms;
  for (const auto& [key, n] : nf.num) {
    Expr rad = radical_expr(key);
    for (const auto& t : n.terms()) {
      terms.push_back(make_product({poly_to_expr(Poly::monomial(t.mono, t.coef)), rad}));
    }
  }
  Expr numerator = make_sum(std::move(terms));
  if (nf.den.is_one()) return numerator;
  Monomial m = nf.den.monomial_content();
  Poly rest = m.empty() ? nf.den : nf.den.divide_monomial(m);
  std::vector<Expr> factors{numerator};
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0) factors.push_back(make_power(vars_.at(i), Rational(-m[i])));
  }
  if (rest.is_constant()) {
    factors.emplace_back(Rational(1 / rest.leading_coefficient()));
  } else {
    factors.push_back(make_power(poly_to_expr(rest), Rational(-1)));
  }
  return make_product(std::move(factors));
}

Expr simplify(const Expr& e) {
  if (e.is_rational() || e.is_symbol()) return e;
  try {
    NFConverter conv(free_symbols(e));
    return conv.to_expr(conv.convert(e));
  } catch (const DivisionByZero&) {
    throw;
  } catch (const Error&) {
    return normalize(e);
  }
}

NFZero nf_zero_test(const Expr& e) {
  try {
    NFConverter conv(free_symbols(e));
    RationalNF nf = conv.convert(e);
    if (nf.is_zero()) return NFZero::Zero;
    return conv.exact() ? NFZero::NonZero : NFZero::Unknown;
  } catch (const DivisionByZero&) {
    throw;
  } catch (const Error&) {
    return NFZero::Unknown;
  }
}

std::pair<Expr, Expr> numerator_denominator(const Expr& e) {
  NFConverter conv(free_symbols(e));
  RationalNF nf = conv.convert(e);
  if (!nf.is_rational() || conv.has_atoms()) {
    throw NotPolynomialInJetVars("expression is not a rational function");
  }
  if (nf.is_zero()) return {Expr(0), Expr(1)};
  return {conv.poly_to_expr(nf.num.begin()->second), conv.poly_to_expr(nf.den)};
}

}  // namespace trilin
