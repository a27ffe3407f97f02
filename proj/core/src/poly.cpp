#include "trilin/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "trilin/errors.hpp"

namespace trilin {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

}  // namespace

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

int monomial_exponent(const Monomial& m, std::size_t var) { return var < m.size() ? m[var] : 0; }

int compare_grlex(const Monomial& a, const Monomial& b) {
  int da = monomial_degree(a);
  int db = monomial_degree(b);
  if (da != db) return da < db ? -1 : 1;
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int ea = monomial_exponent(a, i);
    int eb = monomial_exponent(b, i);
    if (ea != eb) return ea < eb ? -1 : 1;
  }
  return 0;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b) {
  if (b.size() > a.size()) {
    for (std::size_t i = a.size(); i < b.size(); ++i) {
      if (b[i] != 0) return std::nullopt;
    }
  }
  Monomial out = a;
  for (std::size_t i = 0; i < b.size() && i < a.size(); ++i) {
    if (a[i] < b[i]) return std::nullopt;
    out[i] -= b[i];
  }
  trim(out);
  return out;
}

Monomial monomial_min(const Monomial& a, const Monomial& b) {
  Monomial out(std::min(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a[i], b[i]);
  trim(out);
  return out;
}

Poly::Poly(const Rational& c) {
  if (sgn(c) != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::variable(std::size_t var, int power) {
  Monomial m(var + 1, 0);
  m[var] = power;
  trim(m);
  Poly p;
  p.terms_.push_back({std::move(m), Rational(1)});
  return p;
}

Poly Poly::monomial(Monomial m, Rational c) {
  Poly p;
  trim(m);
  if (sgn(c) != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Poly p;
  p.terms_ = std::move(terms);
  for (auto& t : p.terms_) trim(t.mono);
  p.canonicalize();
  return p;
}

void Poly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return compare_grlex(a.mono, b.mono) > 0; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && compare_grlex(out.back().mono, t.mono) == 0) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
  terms_ = std::move(out);
}

bool Poly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty());
}

bool Poly::is_one() const noexcept {
  return terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].coef == 1;
}

const Term& Poly::leading_term() const {
  if (terms_.empty()) throw Error("leading term of the zero polynomial");
  return terms_.front();
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.empty()) return terms_.back().coef;
  return Rational(0);
}

int Poly::degree(std::size_t var) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, monomial_exponent(t.mono, var));
  return d;
}

int Poly::total_degree() const { return terms_.empty() ? 0 : monomial_degree(terms_.front().mono); }

int Poly::min_total_degree() const {
  int d = 0;
  bool first = true;
  for (const auto& t : terms_) {
    int td = monomial_degree(t.mono);
    d = first ? td : std::min(d, td);
    first = false;
  }
  return d;
}

std::vector<std::size_t> Poly::variables() const {
  std::vector<bool> used;
  for (const auto& t : terms_) {
    if (used.size() < t.mono.size()) used.resize(t.mono.size(), false);
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] != 0) used[i] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i]) out.push_back(i);
  }
  return out;
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial m = terms_.front().mono;
  for (const auto& t : terms_) m = monomial_min(m, t.mono);
  return m;
}

Rational Poly::rational_content() const {
  if (terms_.empty()) return Rational(1);
  Integer num = 0;
  Integer den = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coef.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
  }
  Rational c(num, den);
  c.canonicalize();
  return c;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size()) {
      c = -1;
    } else if (j == b.size()) {
      c = 1;
    } else {
      c = compare_grlex(a[i].mono, b[j].mono);
    }
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if (subtract) out.back().coef = -out.back().coef;
    } else {
      Rational s = subtract ? Rational(a[i].coef - b[j].coef) : Rational(a[i].coef + b[j].coef);
      if (sgn(s) != 0) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (b.is_monomial()) return a.mul_monomial(b.terms_[0].mono, b.terms_[0].coef);
  if (a.is_monomial()) return b.mul_monomial(a.terms_[0].mono, a.terms_[0].coef);
  std::vector<Term> prods;
  prods.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) prods.push_back({monomial_mul(x.mono, y.mono), x.coef * y.coef});
  }
  Poly p;
  p.terms_ = std::move(prods);
  p.canonicalize();
  return p;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coef != b.terms_[i].coef) return false;
    if (compare_grlex(a.terms_[i].mono, b.terms_[i].mono) != 0) return false;
  }
  return true;
}

Poly Poly::pow(unsigned long n) const {
  Poly result(Rational(1));
  Poly base = *this;
  while (n > 0) {
    if (n & 1UL) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Poly Poly::mul_monomial(const Monomial& m, const Rational& c) const {
  Poly p;
  if (sgn(c) == 0) return p;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back({monomial_mul(t.mono, m), t.coef * c});
  for (auto& t : p.terms_) trim(t.mono);
  return p;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (is_zero()) return Poly();
  if (d.is_constant()) return *this * Rational(1 / d.terms_[0].coef);
  const Term& ld = d.leading_term();
  for (std::size_t v = 0; v < ld.mono.size(); ++v) {
    if (degree(v) < ld.mono[v]) return std::nullopt;
  }
  if (d.is_monomial()) {
    Poly q;
    for (const auto& t : terms_) {
      auto m = monomial_div(t.mono, ld.mono);
      if (!m) return std::nullopt;
      q.terms_.push_back({std::move(*m), t.coef / ld.coef});
    }
    return q;
  }
  auto greater = [](const Monomial& a, const Monomial& b) { return compare_grlex(a, b) > 0; };
  std::map<Monomial, Rational, decltype(greater)> r(greater);
  for (const auto& t : terms_) r.emplace(t.mono, t.coef);
  std::vector<Term> quotient;
  while (!r.empty()) {
    auto lead = r.begin();
    auto m = monomial_div(lead->first, ld.mono);
    if (!m) return std::nullopt;
    Rational c = lead->second / ld.coef;
    r.erase(lead);
    for (std::size_t k = 1; k < d.terms_.size(); ++k) {
      Monomial pm = monomial_mul(d.terms_[k].mono, *m);
      trim(pm);
      Rational pc = d.terms_[k].coef * c;
      auto [it, inserted] = r.try_emplace(std::move(pm));
      it->second -= pc;
      if (sgn(it->second) == 0) r.erase(it);
    }
    quotient.push_back({std::move(*m), std::move(c)});
  }
  Poly q;
  q.terms_ = std::move(quotient);
  return q;
}

Poly Poly::divide_monomial(const Monomial& m) const {
  Poly q;
  for (const auto& t : terms_) {
    auto r = monomial_div(t.mono, m);
    if (!r) throw Error("monomial does not divide polynomial");
    q.terms_.push_back({std::move(*r), t.coef});
  }
  return q;
}

std::vector<Poly> Poly::coefficients_in(std::size_t var) const {
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(degree(var)) + 1);
  for (const auto& t : terms_) {
    int e = monomial_exponent(t.mono, var);
    Term s = t;
    if (var < s.mono.size()) {
      s.mono[var] = 0;
      trim(s.mono);
    }
    buckets[static_cast<std::size_t>(e)].push_back(std::move(s));
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    Poly p;
    p.terms_ = std::move(b);
    out.push_back(std::move(p));
  }
  return out;
}

Poly Poly::from_coefficients(std::size_t var, const std::vector<Poly>& coeffs) {
  Poly out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    Monomial m(var + 1, 0);
    m[var] = static_cast<int>(k);
    out += coeffs[k].mul_monomial(m, Rational(1));
  }
  return out;
}

Poly Poly::primitive() const {
  if (is_zero()) return *this;
  Rational c = rational_content();
  if (sgn(leading_coefficient()) < 0) c = -c;
  return *this * Rational(1 / c);
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * Rational(1 / leading_coefficient());
}

Rational Poly::evaluate(const std::vector<Rational>& point) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational v = t.coef;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (i >= point.size()) throw Error("evaluation point has too few coordinates");
      v *= pow_int(point[i], t.mono[i]);
    }
    sum += v;
  }
  return sum;
}

std::size_t Poly::hash() const {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    h = h * 1000003u ^ hash_of(t.coef);
    for (int e : t.mono) h = h * 31u + static_cast<std::size_t>(e);
  }
  return h;
}

namespace {

// Modular gcd: images modulo word-sized primes, each computed by
// evaluation and interpolation of all but the first variable, combined by
// Chinese remaindering and checked by exact division.

__extension__ using Wide = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<Wide>(a) * b % p);
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1U) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

std::uint64_t residue(const Integer& c, std::uint64_t p) { return mpz_fdiv_ui(c.get_mpz_t(), p); }

void previous_prime(Integer& n) {
  do {
    n -= 1;
  } while (mpz_probab_prime_p(n.get_mpz_t(), 25) == 0);
}

// Dense univariate polynomials over Z/p, lowest degree first.
using Uni = std::vector<std::uint64_t>;

void trim_uni(Uni& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t eval_uni(const Uni& a, std::uint64_t x, std::uint64_t p) {
  std::uint64_t r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = add_mod(mul_mod(r, x, p), a[i], p);
  return r;
}

Uni mul_uni(const Uni& a, const Uni& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Uni out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = add_mod(out[i + j], mul_mod(a[i], b[j], p), p);
  }
  trim_uni(out);
  return out;
}

// Quotient and remainder of a by nonzero b.
std::pair<Uni, Uni> divmod_uni(Uni a, const Uni& b, std::uint64_t p) {
  if (a.size() < b.size()) return {{}, a};
  Uni q(a.size() - b.size() + 1, 0);
  std::uint64_t inv = inv_mod(b.back(), p);
  for (std::size_t k = q.size(); k-- > 0;) {
    std::uint64_t c = mul_mod(a[k + b.size() - 1], inv, p);
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] = sub_mod(a[k + i], mul_mod(c, b[i], p), p);
  }
  trim_uni(a);
  trim_uni(q);
  return {q, a};
}

Uni monic_uni(Uni a, std::uint64_t p) {
  if (a.empty()) return a;
  std::uint64_t inv = inv_mod(a.back(), p);
  for (auto& c : a) c = mul_mod(c, inv, p);
  return a;
}

Uni gcd_uni(Uni a, Uni b, std::uint64_t p) {
  while (!b.empty()) {
    Uni r = divmod_uni(std::move(a), b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic_uni(std::move(a), p);
}

// Sparse polynomials over Z/p in n local variables, lex order with the
// first variable most significant, largest monomial first.
using Exps = std::vector<int>;
struct LexGreater {
  bool operator()(const Exps& a, const Exps& b) const { return a > b; }
};
using ModPoly = std::map<Exps, std::uint64_t, LexGreater>;
// Coefficients in the variable v of the monomials in the others.
using Split = std::map<Exps, Uni, LexGreater>;

Split split(const ModPoly& a, std::size_t v) {
  Split out;
  for (const auto& [m, c] : a) {
    Exps key = m;
    auto e = static_cast<std::size_t>(key[v]);
    key[v] = 0;
    Uni& u = out[key];
    if (u.size() <= e) u.resize(e + 1, 0);
    u[e] = c;
  }
  return out;
}

ModPoly join(const Split& s, std::size_t v) {
  ModPoly out;
  for (const auto& [key, u] : s) {
    for (std::size_t e = 0; e < u.size(); ++e) {
      if (u[e] == 0) continue;
      Exps m = key;
      m[v] = static_cast<int>(e);
      out.emplace(std::move(m), u[e]);
    }
  }
  return out;
}

ModPoly evaluate(const Split& s, std::uint64_t x, std::uint64_t p) {
  ModPoly out;
  for (const auto& [key, u] : s) {
    std::uint64_t c = eval_uni(u, x, p);
    if (c != 0) out.emplace(key, c);
  }
  return out;
}

ModPoly monic(ModPoly a, std::uint64_t p) {
  if (a.empty()) return a;
  std::uint64_t inv = inv_mod(a.begin()->second, p);
  for (auto& [m, c] : a) c = mul_mod(c, inv, p);
  return a;
}

bool divides(const ModPoly& d, ModPoly r, std::uint64_t p) {
  const auto& [ld, lc] = *d.begin();
  std::uint64_t inv = inv_mod(lc, p);
  while (!r.empty()) {
    auto lead = r.begin();
    Exps q = lead->first;
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] -= ld[i];
      if (q[i] < 0) return false;
    }
    std::uint64_t c = mul_mod(lead->second, inv, p);
    for (const auto& [m, dc] : d) {
      Exps t = m;
      for (std::size_t i = 0; i < t.size(); ++i) t[i] += q[i];
      auto [it, inserted] = r.try_emplace(std::move(t), 0);
      it->second = sub_mod(it->second, mul_mod(c, dc, p), p);
      if (it->second == 0) r.erase(it);
    }
  }
  return true;
}

// Monic gcd of a and b, which involve only the variables 0..k-1.
ModPoly gcd_mod(const ModPoly& a, const ModPoly& b, std::size_t k, std::uint64_t p) {
  if (a.empty()) return monic(b, p);
  if (b.empty()) return monic(a, p);
  std::size_t v = k - 1;
  Split sa = split(a, v);
  Split sb = split(b, v);
  if (k == 1) {
    Uni g = gcd_uni(sa.begin()->second, sb.begin()->second, p);
    return join(Split{{sa.begin()->first, g}}, v);
  }
  auto content = [&](const Split& s) {
    Uni c;
    for (const auto& [key, u] : s) {
      c = gcd_uni(c, u, p);
      if (c.size() == 1) break;
    }
    return c;
  };
  Uni ca = content(sa);
  Uni cb = content(sb);
  Uni c = gcd_uni(ca, cb, p);
  for (auto& [key, u] : sa) u = divmod_uni(u, ca, p).first;
  for (auto& [key, u] : sb) u = divmod_uni(u, cb, p).first;
  const Uni& la = sa.begin()->second;
  const Uni& lb = sb.begin()->second;
  Uni gamma = gcd_uni(la, lb, p);
  std::size_t da = 0;
  std::size_t db = 0;
  for (const auto& [key, u] : sa) da = std::max(da, u.size() - 1);
  for (const auto& [key, u] : sb) db = std::max(db, u.size() - 1);
  std::size_t bound = gamma.size() - 1 + std::min(da, db);
  ModPoly pa = join(sa, v);
  ModPoly pb = join(sb, v);
  Exps zero(a.begin()->first.size(), 0);
  auto with_content = [&](const ModPoly& g) {
    Split s = split(g, v);
    for (auto& [key, u] : s) u = mul_uni(u, c, p);
    return monic(join(s, v), p);
  };

  Split h;
  Exps shape;
  Uni q{1};
  std::size_t points = 0;
  for (std::uint64_t x = 1; x < p; ++x) {
    std::uint64_t gx = eval_uni(gamma, x, p);
    if (gx == 0 || eval_uni(la, x, p) == 0 || eval_uni(lb, x, p) == 0) continue;
    ModPoly g = gcd_mod(evaluate(sa, x, p), evaluate(sb, x, p), k - 1, p);
    const Exps& lm = g.begin()->first;
    if (lm == zero) return with_content(ModPoly{{zero, 1}});
    if (h.empty() || lm < shape) {
      h.clear();
      for (const auto& [m, gc] : g) h[m] = Uni{mul_mod(gc, gx, p)};
      shape = lm;
      q = Uni{sub_mod(0, x, p), 1};
      points = 1;
      continue;
    }
    if (lm > shape) continue;
    std::uint64_t qinv = inv_mod(eval_uni(q, x, p), p);
    bool changed = false;
    std::set<Exps, LexGreater> keys;
    for (const auto& [m, u] : h) keys.insert(m);
    for (const auto& [m, gc] : g) keys.insert(m);
    for (const auto& m : keys) {
      auto it = g.find(m);
      std::uint64_t target = it == g.end() ? 0 : mul_mod(it->second, gx, p);
      Uni& u = h[m];
      std::uint64_t diff = sub_mod(target, eval_uni(u, x, p), p);
      if (diff == 0) continue;
      changed = true;
      Uni step = mul_uni(q, Uni{mul_mod(diff, qinv, p)}, p);
      if (u.size() < step.size()) u.resize(step.size(), 0);
      for (std::size_t i = 0; i < step.size(); ++i) u[i] = add_mod(u[i], step[i], p);
      trim_uni(u);
    }
    for (auto it = h.begin(); it != h.end();) it = it->second.empty() ? h.erase(it) : std::next(it);
    q = mul_uni(q, Uni{sub_mod(0, x, p), 1}, p);
    ++points;
    if (changed && points <= bound) continue;
    Split pp = h;
    Uni hc;
    for (const auto& [m, u] : pp) hc = gcd_uni(hc, u, p);
    for (auto& [m, u] : pp) u = divmod_uni(u, hc, p).first;
    ModPoly cand = join(pp, v);
    if (divides(cand, pa, p) && divides(cand, pb, p)) return with_content(cand);
    if (points > bound) {
      h.clear();
      points = 0;
    }
  }
  throw Error("modular gcd ran out of evaluation points");
}

// gcd of primitive integer polynomials.
Poly modular_gcd(const Poly& a, const Poly& b) {
  std::vector<std::size_t> vars = a.variables();
  for (std::size_t v : b.variables()) {
    if (!std::count(vars.begin(), vars.end(), v)) vars.push_back(v);
  }
  // The variable of highest degree goes innermost, where Euclid is cheap.
  auto weight = [&](std::size_t v) { return std::min(a.degree(v), b.degree(v)); };
  std::sort(vars.begin(), vars.end(), [&](std::size_t x, std::size_t y) {
    return weight(x) != weight(y) ? weight(x) > weight(y) : x < y;
  });
  std::size_t n = vars.size();
  auto local = [&](const Monomial& m) {
    Exps e(n, 0);
    for (std::size_t i = 0; i < n; ++i) e[i] = monomial_exponent(m, vars[i]);
    return e;
  };
  std::map<Exps, Integer, LexGreater> ia;
  std::map<Exps, Integer, LexGreater> ib;
  for (const auto& t : a.terms()) ia.emplace(local(t.mono), t.coef.get_num());
  for (const auto& t : b.terms()) ib.emplace(local(t.mono), t.coef.get_num());
  const Integer& lca = ia.begin()->second;
  const Integer& lcb = ib.begin()->second;
  Integer lc_gcd;
  mpz_gcd(lc_gcd.get_mpz_t(), lca.get_mpz_t(), lcb.get_mpz_t());
  auto reduce = [](const std::map<Exps, Integer, LexGreater>& src, std::uint64_t p) {
    ModPoly out;
    for (const auto& [m, c] : src) {
      std::uint64_t r = residue(c, p);
      if (r != 0) out.emplace(m, r);
    }
    return out;
  };

  auto attempt = [&](const std::map<Exps, Integer, LexGreater>& coeffs) -> std::optional<Poly> {
    std::vector<Term> terms;
    for (const auto& [e, c] : coeffs) {
      Monomial m;
      for (std::size_t i = 0; i < n; ++i) {
        if (e[i] == 0) continue;
        if (m.size() <= vars[i]) m.resize(vars[i] + 1, 0);
        m[vars[i]] = e[i];
      }
      terms.push_back({std::move(m), Rational(c)});
    }
    Poly cand = Poly::from_terms(std::move(terms)).primitive();
    if (a.divide_exact(cand) && b.divide_exact(cand)) return cand;
    return std::nullopt;
  };

  Integer prime = Integer(1) << 62;
  Integer modulus = 1;
  std::map<Exps, Integer, LexGreater> lifted;
  std::map<Exps, Integer, LexGreater> previous;
  Exps shape;
  for (int round = 0; round < 10000; ++round) {
    previous_prime(prime);
    std::uint64_t p = mpz_get_ui(prime.get_mpz_t());
    if (residue(lca, p) == 0 || residue(lcb, p) == 0) continue;
    ModPoly g = gcd_mod(reduce(ia, p), reduce(ib, p), n, p);
    const Exps& lm = g.begin()->first;
    if (std::all_of(lm.begin(), lm.end(), [](int e) { return e == 0; })) return Poly(Rational(1));
    std::uint64_t scale = residue(lc_gcd, p);
    for (auto& [m, c] : g) c = mul_mod(c, scale, p);
    if (!lifted.empty() && lm > shape) continue;
    if (lifted.empty() || lm < shape) {
      lifted.clear();
      for (const auto& [m, c] : g) lifted[m] = Integer(static_cast<unsigned long>(c));
      shape = lm;
      modulus = prime;
      previous.clear();
      // Small balanced coefficients from a single prime are usually exact.
      Integer half = prime / 2;
      Integer small = Integer(1) << 31;
      bool fits = true;
      for (const auto& [m, c] : lifted) {
        Integer s = c > half ? Integer(c - prime) : c;
        if (abs(s) >= small) {
          fits = false;
          break;
        }
        if (s != 0) previous.emplace(m, s);
      }
      if (fits) {
        if (auto found = attempt(previous)) return *found;
      }
      previous.clear();
      continue;
    }
    Integer inv;
    mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), prime.get_mpz_t());
    std::uint64_t minv = mpz_get_ui(inv.get_mpz_t());
    std::set<Exps, LexGreater> keys;
    for (const auto& [m, c] : lifted) keys.insert(m);
    for (const auto& [m, c] : g) keys.insert(m);
    for (const auto& m : keys) {
      auto it = g.find(m);
      std::uint64_t target = it == g.end() ? 0 : it->second;
      Integer& h = lifted[m];
      std::uint64_t diff = sub_mod(target, residue(h, p), p);
      h += modulus * Integer(static_cast<unsigned long>(mul_mod(diff, minv, p)));
    }
    modulus *= prime;
    Integer half = modulus / 2;
    std::map<Exps, Integer, LexGreater> balanced;
    for (const auto& [m, c] : lifted) {
      Integer s = c > half ? Integer(c - modulus) : c;
      if (s != 0) balanced.emplace(m, s);
    }
    if (balanced != previous) {
      previous = std::move(balanced);
      continue;
    }
    if (auto g = attempt(previous)) return *g;
  }
  throw Error("modular gcd did not converge");
}

Poly gcd_core(const Poly& a, const Poly& b) {
  if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
  if (a.size() >= b.size()) {
    if (a.divide_exact(b)) return b.primitive();
  } else if (b.divide_exact(a)) {
    return a.primitive();
  }
  struct Entry {
    Poly a;
    Poly b;
    Poly g;
  };
  thread_local std::unordered_multimap<std::size_t, Entry> cache;
  std::size_t key = a.hash() * 31 + b.hash();
  auto [lo, hi] = cache.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    if (it->second.a == a && it->second.b == b) return it->second.g;
  }
  Poly g = modular_gcd(a.primitive(), b.primitive());
  if (cache.size() > 4096) cache.clear();
  cache.emplace(key, Entry{a, b, g});
  return g;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial m = monomial_min(ma, mb);
  Poly ra = ma.empty() ? a : a.divide_monomial(ma);
  Poly rb = mb.empty() ? b : b.divide_monomial(mb);
  Poly g = gcd_core(ra, rb);
  if (!m.empty()) g = g.mul_monomial(m, Rational(1));
  return g.primitive();
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  Poly g = gcd(a, b);
  return (*a.divide_exact(g) * b).primitive();
}

std::optional<Poly> exact_root(const Poly& p, unsigned long k) {
  if (k == 0) throw Error("zeroth root");
  if (k == 1 || p.is_zero()) return p;
  const Term& lt = p.leading_term();
  auto lc_root = exact_root(lt.coef, k);
  if (!lc_root) return std::nullopt;
  Monomial lm;
  for (int e : lt.mono) {
    if (e % static_cast<int>(k) != 0) return std::nullopt;
    lm.push_back(e / static_cast<int>(k));
  }
  if (!exact_root(p.terms().back().coef, k)) return std::nullopt;
  int min_degree = p.min_total_degree();
  Poly root = Poly::monomial(lm, *lc_root);
  Poly lead = root.pow(k - 1) * Rational(static_cast<long>(k));
  const Term& step = lead.leading_term();
  auto kk = static_cast<int>(k);
  while (true) {
    Poly e = p - root.pow(k);
    if (e.is_zero()) return root;
    const Term& le = e.leading_term();
    auto m = monomial_div(le.mono, step.mono);
    if (!m) return std::nullopt;
    if (monomial_degree(*m) * kk < min_degree) return std::nullopt;
    if (compare_grlex(*m, root.terms().back().mono) >= 0) return std::nullopt;
    root += Poly::monomial(*m, le.coef / step.coef);
  }
}

}  // namespace trilin
