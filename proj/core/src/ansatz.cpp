#include "trilin/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <json.hpp>

#include "trilin/errors.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {

std::string to_string(AnsatzFamily f) {
  switch (f) {
    case AnsatzFamily::Monomial:
      return "monomial";
    case AnsatzFamily::SumOfMonomials:
      return "sum-of-monomials";
    case AnsatzFamily::PolynomialOfDegree:
      return "polynomial";
  }
  return "monomial";
}

Placeholders DeterminingSystem::placeholders() const {
  Placeholders ph;
  for (const auto& u : unknowns) ph.declare(u.name, u.args);
  return ph;
}

const Unknown& DeterminingSystem::unknown(const std::string& name) const {
  for (const auto& u : unknowns) {
    if (u.name == name) return u;
  }
  throw Error("unknown '" + name + "' is not declared");
}

std::vector<Expr> DeterminingSystem::equations_for(const std::string& name) const {
  std::vector<Expr> out;
  for (const auto& e : equations) {
    if (e.solves == name) out.push_back(e.expr);
  }
  return out;
}

namespace {

nlohmann::json expr_json(const Expr& e) { return nlohmann::json::parse(trilin::to_json(e)); }
Expr json_expr(const nlohmann::json& j) { return from_json(j.dump()); }

nlohmann::json bindings_json(const Bindings& b) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : b) j[k] = expr_json(v);
  return j;
}

Bindings json_bindings(const nlohmann::json& j) {
  Bindings b;
  for (const auto& [k, v] : j.items()) b[k] = json_expr(v);
  return b;
}

}  // namespace

std::string DeterminingSystem::to_json() const {
  nlohmann::json j;
  j["branch"] = branch;
  j["params"] = params;
  j["unknowns"] = nlohmann::json::array();
  for (const auto& u : unknowns) {
    j["unknowns"].push_back({{"name", u.name}, {"args", u.args}, {"may_vanish", u.may_vanish}});
  }
  j["equations"] = nlohmann::json::array();
  for (const auto& e : equations) {
    j["equations"].push_back(
        {{"solves", e.solves}, {"origin", e.origin}, {"infix", to_infix(e.expr)}, {"expr", expr_json(e.expr)}});
  }
  j["fixed"] = bindings_json(fixed);
  j["data"] = bindings_json(data);
  return j.dump(2);
}

DeterminingSystem DeterminingSystem::from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    DeterminingSystem sys;
    sys.branch = j.at("branch").get<std::string>();
    if (j.contains("params")) sys.params = j.at("params").get<std::vector<std::string>>();
    for (const auto& u : j.at("unknowns")) {
      sys.unknowns.push_back({u.at("name").get<std::string>(),
                              u.at("args").get<std::vector<std::string>>(),
                              u.value("may_vanish", false)});
    }
    for (const auto& e : j.at("equations")) {
      sys.equations.push_back({json_expr(e.at("expr")), e.at("solves").get<std::string>(),
                               e.value("origin", std::string())});
    }
    if (j.contains("fixed")) sys.fixed = json_bindings(j.at("fixed"));
    if (j.contains("data")) sys.data = json_bindings(j.at("data"));
    return sys;
  } catch (const nlohmann::json::exception& err) {
    throw Error(std::string("malformed determining system JSON: ") + err.what());
  }
}

Expr substitute_unknown(const Expr& e, const Placeholders& ph, const std::string& unknown,
                        const Expr& value) {
  Bindings b;
  const auto& args = ph.args(unknown);
  for (const auto& s : free_symbols(e)) {
    auto d = ph.decode(s);
    if (!d || d->unknown != unknown) continue;
    Expr v = value;
    for (std::size_t i = 0; i < args.size(); ++i) {
      for (int k = 0; k < d->orders[i]; ++k) v = diff(v, args[i]);
    }
    b[s] = v;
  }
  if (b.empty()) return e;
  return substitute(e, b);
}

Expr substitute_unknowns(const Expr& e, const Placeholders& ph, const Bindings& values) {
  Expr out = e;
  for (const auto& [name, v] : values) {
    if (ph.declared(name)) out = substitute_unknown(out, ph, name, v);
  }
  return out;
}

namespace {

bool is_placeholder(const Placeholders& ph, const std::string& s) { return ph.decode(s).has_value(); }

std::set<std::string> unknown_symbols(const Expr& e, const Placeholders& ph,
                                      const std::string& unknown) {
  std::set<std::string> out;
  for (const auto& s : free_symbols(e)) {
    auto d = ph.decode(s);
    if (d && d->unknown == unknown) out.insert(s);
  }
  return out;
}

}  // namespace

std::vector<Expr> match_coefficients(const Expr& e, const std::vector<std::string>& vars) {
  Expr s = simplify(e);
  if (s.is_literal_zero()) return {};
  std::set<std::string> symbols = free_symbols(s);
  NFConverter conv(symbols);
  RationalNF nf = conv.convert(s);
  std::vector<std::size_t> idx;
  for (const auto& v : vars) {
    if (auto i = conv.find_variable(Expr::symbol(v))) idx.push_back(*i);
  }
  for (const auto& atom : conv.variables()) {
    if (atom.is_symbol()) continue;
    for (const auto& v : vars) {
      if (depends_on(atom, v)) throw NotPolynomialInJetVars("'" + v + "' occurs inside " + to_infix(atom));
    }
  }
  std::map<Monomial, std::map<RadicalKey, Poly>> groups;
  for (const auto& [key, poly] : nf.num) {
    for (const auto& t : poly.terms()) {
      Monomial outer;
      Monomial inner = t.mono;
      for (std::size_t i : idx) {
        int ex = monomial_exponent(t.mono, i);
        if (ex == 0) continue;
        if (outer.size() <= i) outer.resize(i + 1, 0);
        outer[i] = ex;
        inner[i] = 0;
      }
      while (!outer.empty() && outer.back() == 0) outer.pop_back();
      while (!inner.empty() && inner.back() == 0) inner.pop_back();
      groups[outer][key] += Poly::monomial(inner, t.coef);
    }
  }
  // Placeholder variables may vanish; only other variables are divided out.
  std::vector<bool> strippable(conv.variables().size(), false);
  Placeholders none;
  for (std::size_t i = 0; i < conv.variables().size(); ++i) {
    const Expr& v = conv.variables()[i];
    strippable[i] = v.is_symbol() && v.name().find('_') == std::string::npos &&
                    (v.name().size() == 1 || v.name() == "xbar" || v.name() == "ubar" ||
                     std::find(vars.begin(), vars.end(), v.name()) != vars.end());
  }
  std::vector<Expr> out;
  for (auto& [outer, polys] : groups) {
    std::optional<Monomial> content;
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (auto& [key, p] : polys) {
      if (p.is_zero()) continue;
      Monomial mc = p.monomial_content();
      content = content ? monomial_min(*content, mc) : mc;
      Rational rc = p.rational_content();
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), rc.get_num().get_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), rc.get_den().get_mpz_t());
    }
    if (!content) continue;
    Monomial strip = *content;
    for (std::size_t i = 0; i < strip.size(); ++i) {
      if (i >= strippable.size() || !strippable[i]) strip[i] = 0;
    }
    Rational scale(num_gcd, den_lcm);
    scale.canonicalize();
    RationalNF part;
    for (auto& [key, p] : polys) {
      if (p.is_zero()) continue;
      part.num[key] = p.divide_monomial(strip) * Rational(Rational(1) / scale);
    }
    // Sign: leading coefficient of the first component positive.
    if (!part.num.empty() && sgn(part.num.begin()->second.leading_coefficient()) < 0) {
      for (auto& [key, p] : part.num) p = -p;
    }
    out.push_back(simplify(conv.to_expr(part)));
  }
  (void)none;
  return out;
}

namespace {

// ---- linear algebra over Q ----

using Row = std::map<int, Rational>;  // column -> coefficient; column n is the constant

class LinearSystem {
 public:
  explicit LinearSystem(int n) : n_(n) {}

  // Adds sum a_j c_j + a_n = 0; returns false when inconsistent.
  bool add(Row row) {
    reduce(row);
    if (row.empty()) return true;
    if (row.begin()->first == n_) {
      consistent_ = false;
      return false;
    }
    int pivot = row.begin()->first;
    Rational lead = row.begin()->second;
    for (auto& [c, v] : row) v /= lead;
    for (auto& [p, r] : pivots_) {
      auto it = r.find(pivot);
      if (it == r.end()) continue;
      Rational f = it->second;
      axpy(r, row, -f);
    }
    pivots_[pivot] = std::move(row);
    return true;
  }

  bool consistent() const { return consistent_; }

  // Free variables are zero, except that the first free variable is one
  // when a non-zero solution of a homogeneous system is requested.
  std::optional<std::vector<Rational>> solve(bool nonzero) const {
    if (!consistent_) return std::nullopt;
    std::vector<Rational> x(n_, Rational(0));
    bool has_constant = false;
    for (const auto& [p, r] : pivots_) {
      if (r.count(n_)) has_constant = true;
    }
    int free_var = -1;
    if (nonzero && !has_constant) {
      for (int j = 0; j < n_; ++j) {
        if (!pivots_.count(j)) {
          free_var = j;
          break;
        }
      }
      if (free_var < 0) return std::nullopt;
      x[free_var] = 1;
    }
    for (const auto& [p, r] : pivots_) {
      Rational v = 0;
      for (const auto& [c, a] : r) {
        if (c == p) continue;
        if (c == n_) {
          v -= a;
        } else if (c == free_var) {
          v -= a;
        }
      }
      x[p] = v;
    }
    return x;
  }

 private:
  static void axpy(Row& target, const Row& src, const Rational& f) {
    for (const auto& [c, v] : src) {
      Rational nv = target[c] + f * v;
      if (sgn(nv) == 0) {
        target.erase(c);
      } else {
        target[c] = nv;
      }
    }
  }

  void reduce(Row& row) const {
    for (auto it = row.begin(); it != row.end();) {
      if (sgn(it->second) == 0) {
        it = row.erase(it);
        continue;
      }
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      Rational f = it->second;
      axpy(row, p->second, -f);
      it = row.begin();
    }
  }

  int n_;
  bool consistent_ = true;
  std::map<int, Row> pivots_;
};

// Rows of sum_j c_j N_j + N_const = 0 from NF numerators over a common
// denominator. Returns false when some coefficient involves the unknowns.
bool add_rows(NFConverter& conv, const std::vector<RationalNF>& columns, const RationalNF& constant,
              LinearSystem& system) {
  int n = static_cast<int>(columns.size());
  Poly den(Rational(1));
  for (const auto& c : columns) den = lcm(den, c.den);
  den = lcm(den, constant.den);
  std::map<std::pair<RadicalKey, Monomial>, Row> rows;
  auto feed = [&](const RationalNF& nf, int col) {
    if (nf.is_zero()) return true;
    auto factor = den.divide_exact(nf.den);
    if (!factor) return false;
    for (const auto& [key, p] : nf.num) {
      Poly scaled = p * *factor;
      for (const auto& t : scaled.terms()) {
        Row& r = rows[{key, t.mono}];
        r[col] += t.coef;
      }
    }
    return true;
  };
  for (int j = 0; j < n; ++j) {
    if (!feed(columns[j], j)) return false;
  }
  if (!feed(constant, n)) return false;
  (void)conv;
  for (auto& [k, r] : rows) {
    if (!system.add(r)) return false;
  }
  return true;
}

// ---- polynomial helpers ----

Poly poly_diff(const Poly& p, std::size_t var) {
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    int e = monomial_exponent(t.mono, var);
    if (e == 0) continue;
    Monomial m = t.mono;
    m[var] -= 1;
    while (!m.empty() && m.back() == 0) m.pop_back();
    terms.push_back({m, t.coef * e});
  }
  return Poly::from_terms(std::move(terms));
}

Poly strip_content(const Poly& p) {
  if (p.is_zero()) return p;
  return p.divide_monomial(p.monomial_content()).primitive();
}

// Pairwise coprime polynomials whose products cover the square-free parts
// of the inputs; monomials and constants are dropped.
std::vector<Poly> coprime_factors(const std::vector<Poly>& inputs) {
  std::vector<Poly> set;
  for (const auto& p : inputs) {
    Poly s = strip_content(p);
    if (s.is_zero() || s.is_constant()) continue;
    set.push_back(s);
  }
  bool changed = true;
  int rounds = 0;
  while (changed && rounds++ < 64) {
    changed = false;
    for (std::size_t i = 0; i < set.size() && !changed; ++i) {
      for (std::size_t v : set[i].variables()) {
        Poly g = strip_content(gcd(set[i], poly_diff(set[i], v)));
        if (g.is_zero() || g.is_constant()) continue;
        auto q = set[i].divide_exact(g);
        if (!q) continue;
        Poly a = strip_content(*q);
        set.erase(set.begin() + static_cast<long>(i));
        set.push_back(g);
        if (!a.is_constant()) set.push_back(a);
        changed = true;
        break;
      }
      for (std::size_t j = i + 1; j < set.size() && !changed; ++j) {
        if (set[i] == set[j]) {
          set.erase(set.begin() + static_cast<long>(j));
          changed = true;
          break;
        }
        Poly g = strip_content(gcd(set[i], set[j]));
        if (g.is_zero() || g.is_constant()) continue;
        auto qa = set[i].divide_exact(g);
        auto qb = set[j].divide_exact(g);
        if (!qa || !qb) continue;
        Poly a = strip_content(*qa);
        Poly b = strip_content(*qb);
        set.erase(set.begin() + static_cast<long>(j));
        set.erase(set.begin() + static_cast<long>(i));
        set.push_back(g);
        if (!a.is_constant()) set.push_back(a);
        if (!b.is_constant()) set.push_back(b);
        changed = true;
      }
    }
  }
  std::vector<Poly> out;
  for (auto& p : set) {
    if (p.is_monomial()) continue;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
    if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
    return a.size() < b.size();
  });
  return out;
}

// Non-monomial factors of the denominators of es that depend on args only.
std::vector<Expr> denominator_factors(const std::vector<Expr>& es,
                                      const std::vector<std::string>& args, std::size_t limit) {
  std::set<std::string> symbols;
  for (const auto& e : es) {
    auto s = free_symbols(e);
    symbols.insert(s.begin(), s.end());
  }
  NFConverter conv(symbols);
  std::vector<Poly> dens;
  for (const auto& e : es) {
    try {
      dens.push_back(conv.convert(e).den);
    } catch (const Error&) {
    }
  }
  std::vector<Expr> out;
  for (const auto& p : coprime_factors(dens)) {
    Expr fe = conv.poly_to_expr(p);
    if (contains_function(fe)) continue;
    bool ok = true;
    for (const auto& s : free_symbols(fe)) {
      if (std::find(args.begin(), args.end(), s) == args.end()) ok = false;
    }
    if (!ok) continue;
    out.push_back(fe);
    if (out.size() >= limit) break;
  }
  return out;
}

// ---- candidate checks ----

class Checker {
 public:
  Checker(const std::vector<Expr>& eqs, const Unknown& unknown, const Placeholders& ph,
          const AnsatzOptions& options)
      : eqs_(eqs), unknown_(unknown), ph_(ph), options_(options) {}

  bool exact(const Expr& value) const {
    for (const auto& e : eqs_) {
      Expr r = simplify(substitute_unknown(e, ph_, unknown_.name, value));
      if (r.is_literal_zero()) continue;
      try {
        if (is_zero(r, options_.zero) != ZeroResult::Zero) return false;
      } catch (const EvaluationDomain&) {
        return false;
      }
    }
    return true;
  }

  // Exact constants c with value = c * m solving the first equation that
  // pins c down, in ascending numeric order; {1} when every c works.
  std::vector<Expr> constants(const Expr& m) const {
    const Expr c = Expr::symbol("ansatzc");
    for (const auto& e : eqs_) {
      Expr ec = simplify(substitute_unknown(e, ph_, unknown_.name, c * m));
      if (ec.is_literal_zero()) continue;
      Expr a0 = simplify(substitute(ec, {{"ansatzc", Expr(0)}}));
      Expr d1 = diff(ec, "ansatzc");
      Expr a1 = simplify(substitute(d1, {{"ansatzc", Expr(0)}}));
      Expr a2 = simplify(Expr(Rational(1, 2)) * substitute(diff(d1, "ansatzc"), {{"ansatzc", Expr(0)}}));
      if (depends_on(a0, "ansatzc") || depends_on(a1, "ansatzc") || depends_on(a2, "ansatzc")) {
        return {};
      }
      bool z2 = a2.is_literal_zero() || nf_zero_test(a2) == NFZero::Zero;
      bool z1 = a1.is_literal_zero() || nf_zero_test(a1) == NFZero::Zero;
      if (z2 && z1) {
        if (a0.is_literal_zero() || nf_zero_test(a0) == NFZero::Zero) continue;
        return {};
      }
      auto constant = [&](const Expr& r) {
        for (const auto& s : free_symbols(r)) {
          if (s == "x" || s == "u" || s == "p" || s == "q" || is_placeholder(ph_, s)) return false;
        }
        return true;
      };
      if (z2) {
        Expr r = simplify(-a0 / a1);
        if (!constant(r)) return {};
        return {r};
      }
      Expr b = simplify(a1 / a2);
      Expr d = simplify(a0 / a2);
      if (!constant(b) || !constant(d)) return {};
      Expr disc = simplify(b * b - 4 * d);
      if (disc.is_rational() && sgn(disc.value()) < 0) return {};
      Expr root = simplify(sqrt(disc));
      Expr lo = simplify((-b - root) / 2);
      Expr hi = simplify((-b + root) / 2);
      if (lo == hi) return {lo};
      return {lo, hi};
    }
    return {Expr(1)};
  }

 private:
  const std::vector<Expr>& eqs_;
  const Unknown& unknown_;
  const Placeholders& ph_;
  const AnsatzOptions& options_;
};

// ---- numeric screening of monomial candidates ----

struct Sample {
  FloatPoint point;
  std::vector<long double> f;                            // factor values
  std::vector<std::vector<long double>> df;              // [factor][arg]
  std::vector<std::vector<std::vector<long double>>> d2f;  // [factor][arg][arg]
  std::vector<long double> e0;                           // equations with the unknown at zero
  std::vector<std::vector<long double>> lin;             // [equation][symbol]
  std::vector<std::vector<std::vector<long double>>> quad;  // [equation][symbol][symbol]
};

class Screen {
 public:
  Screen(const std::vector<Expr>& eqs, const Unknown& unknown, const Placeholders& ph,
         const std::vector<Expr>& factors, std::uint64_t seed)
      : eqs_(eqs), unknown_(unknown), factors_(factors) {
    std::set<std::string> others;
    for (const auto& e : eqs) {
      for (const auto& s : free_symbols(e)) {
        auto d = ph.decode(s);
        if (d && d->unknown == unknown.name) {
          if (!std::count(symbols_.begin(), symbols_.end(), s)) {
            symbols_.push_back(s);
            orders_.push_back(d->orders);
          }
        } else {
          others.insert(s);
        }
      }
    }
    for (const auto& f : factors) {
      auto fs = free_symbols(f);
      others.insert(fs.begin(), fs.end());
    }
    std::size_t nargs = unknown.args.size();
    for (const auto& o : orders_) {
      int total = 0;
      for (int k : o) total += k;
      if (total > 2) usable_ = false;
    }
    std::vector<std::vector<Expr>> dfe(factors.size());
    std::vector<std::vector<std::vector<Expr>>> d2fe(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      for (std::size_t a = 0; a < nargs; ++a) {
        dfe[i].push_back(diff(factors[i], unknown.args[a]));
        d2fe[i].emplace_back();
        for (std::size_t b = 0; b < nargs; ++b) d2fe[i][a].push_back(diff(dfe[i][a], unknown.args[b]));
      }
    }
    std::vector<std::vector<Expr>> lin(eqs.size());
    std::vector<std::vector<std::vector<Expr>>> quad(eqs.size());
    for (std::size_t k = 0; k < eqs.size() && quadratic_; ++k) {
      for (std::size_t j = 0; j < symbols_.size() && quadratic_; ++j) {
        lin[k].push_back(simplify(diff_raw(eqs[k], symbols_[j])));
        quad[k].emplace_back();
        for (std::size_t l = 0; l < symbols_.size(); ++l) {
          Expr d = simplify(diff_raw(lin[k][j], symbols_[l]));
          for (const auto& sym : free_symbols(d)) {
            if (std::count(symbols_.begin(), symbols_.end(), sym)) quadratic_ = false;
          }
          quad[k][j].push_back(d);
        }
      }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<long double> dist(0.55L, 1.85L);
    for (int attempt = 0; attempt < 40 && samples_.size() < 3; ++attempt) {
      Sample s;
      for (const auto& o : others) s.point[o] = dist(rng) * ((attempt % 3 == 2 && o != "x") ? 1 : 1);
      bool ok = true;
      try {
        for (std::size_t i = 0; i < factors.size() && ok; ++i) {
          long double v = eval_float(factors[i], s.point);
          if (!std::isfinite(static_cast<double>(v)) || std::fabs(v) < 1e-3L) ok = false;
          s.f.push_back(v);
          s.df.emplace_back();
          s.d2f.emplace_back();
          for (std::size_t a = 0; a < nargs; ++a) {
            s.df[i].push_back(eval_float(dfe[i][a], s.point));
            s.d2f[i].emplace_back();
            for (std::size_t b = 0; b < nargs; ++b) s.d2f[i][a].push_back(eval_float(d2fe[i][a][b], s.point));
          }
        }
        if (ok) {
          FloatPoint pt = s.point;
          for (const auto& sym : symbols_) pt[sym] = 0;
          for (std::size_t k = 0; k < eqs.size(); ++k) {
            long double v = eval_float(eqs[k], pt);
            if (!std::isfinite(static_cast<double>(v))) ok = false;
            s.e0.push_back(v);
            if (!quadratic_) continue;
            s.lin.emplace_back();
            s.quad.emplace_back();
            for (std::size_t j = 0; j < symbols_.size(); ++j) {
              s.lin[k].push_back(eval_float(lin[k][j], pt));
              s.quad[k].emplace_back();
              for (std::size_t l = 0; l < symbols_.size(); ++l) {
                s.quad[k][j].push_back(eval_float(quad[k][j][l], pt));
              }
            }
          }
        }
      } catch (const Error&) {
        ok = false;
      }
      if (ok) samples_.push_back(std::move(s));
    }
    if (samples_.size() < 2) usable_ = false;
  }

  bool usable() const { return usable_; }

  // Whether c * prod factors^e can satisfy every equation numerically.
  bool plausible(const std::vector<int>& e) const {
    std::vector<long double> roots;
    bool any_c = true;
    for (std::size_t k = 0; k < eqs_.size(); ++k) {
      long double v0 = samples_[0].e0[k];
      long double v1;
      long double vm;
      long double v2;
      if (!value(samples_[0], k, e, 1, v1) || !value(samples_[0], k, e, -1, vm) ||
          !value(samples_[0], k, e, 2, v2)) {
        return false;
      }
      long double scale = 1 + std::max({std::fabs(v0), std::fabs(v1), std::fabs(vm), std::fabs(v2)});
      long double beta = (v1 - vm) / 2;
      long double gamma = (v1 + vm) / 2 - v0;
      if (std::fabs(v0 + 2 * beta + 4 * gamma - v2) > 1e-6L * scale) return false;
      long double tol = 1e-9L * scale;
      if (std::fabs(gamma) <= tol && std::fabs(beta) <= tol) {
        if (std::fabs(v0) > tol) return false;
        continue;
      }
      any_c = false;
      if (std::fabs(gamma) <= tol) {
        roots = {-v0 / beta};
      } else {
        long double disc = beta * beta - 4 * gamma * v0;
        if (disc < -tol * scale) return false;
        long double sq = std::sqrt(std::max(disc, 0.0L));
        roots = {(-beta - sq) / (2 * gamma), (-beta + sq) / (2 * gamma)};
      }
      break;
    }
    if (any_c) roots = {1};
    for (long double c : roots) {
      if (std::fabs(c) < 1e-12L && !unknown_.may_vanish) continue;
      bool all = true;
      for (const auto& s : samples_) {
        for (std::size_t k = 0; k < eqs_.size() && all; ++k) {
          long double v;
          if (!value(s, k, e, c, v)) {
            all = false;
            break;
          }
          long double v1;
          value(s, k, e, 1, v1);
          long double scale = 1 + std::fabs(s.e0[k]) + std::fabs(v1) * std::max(1.0L, std::fabs(c));
          if (std::fabs(v) > 1e-7L * scale) all = false;
        }
        if (!all) break;
      }
      if (all) return true;
    }
    return false;
  }

 private:
  bool value(const Sample& s, std::size_t k, const std::vector<int>& e, long double c,
             long double& out) const {
    std::size_t nargs = unknown_.args.size();
    long double m = c;
    std::vector<long double> L(nargs, 0);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (e[i] == 0) continue;
      m *= std::pow(s.f[i], static_cast<long double>(e[i]));
      for (std::size_t a = 0; a < nargs; ++a) L[a] += e[i] * s.df[i][a] / s.f[i];
    }
    std::vector<long double> vals(symbols_.size(), 0);
    for (std::size_t j = 0; j < symbols_.size(); ++j) {
      const auto& o = orders_[j];
      std::vector<std::size_t> dirs;
      for (std::size_t a = 0; a < nargs; ++a) {
        for (int r = 0; r < o[a]; ++r) dirs.push_back(a);
      }
      long double v = m;
      if (dirs.size() == 1) {
        v = m * L[dirs[0]];
      } else if (dirs.size() == 2) {
        std::size_t a = dirs[0];
        std::size_t b = dirs[1];
        long double second = L[a] * L[b];
        for (std::size_t i = 0; i < factors_.size(); ++i) {
          if (e[i] == 0) continue;
          second += e[i] * (s.d2f[i][a][b] / s.f[i] - s.df[i][a] * s.df[i][b] / (s.f[i] * s.f[i]));
        }
        v = m * second;
      }
      vals[j] = v;
    }
    if (quadratic_) {
      out = s.e0[k];
      for (std::size_t j = 0; j < vals.size(); ++j) {
        long double acc = s.lin[k][j];
        for (std::size_t l = 0; l < vals.size(); ++l) acc += s.quad[k][j][l] * vals[l] / 2;
        out += acc * vals[j];
      }
      return std::isfinite(static_cast<double>(out));
    }
    FloatPoint pt = s.point;
    for (std::size_t j = 0; j < vals.size(); ++j) pt[symbols_[j]] = vals[j];
    try {
      out = eval_float(eqs_[k], pt);
    } catch (const Error&) {
      return false;
    }
    return std::isfinite(static_cast<double>(out));
  }

  const std::vector<Expr>& eqs_;
  const Unknown& unknown_;
  std::vector<Expr> factors_;
  std::vector<std::string> symbols_;
  std::vector<std::vector<int>> orders_;
  std::vector<Sample> samples_;
  bool usable_ = true;
  bool quadratic_ = true;
};

// Exponent vectors with |e_i| <= bound_i, by increasing L1 norm, then
// lexicographically.
void enumerate_shell(const std::vector<int>& bounds, int norm,
                     const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> e(bounds.size(), 0);
  std::vector<int> cap_after(bounds.size() + 1, 0);
  for (std::size_t i = bounds.size(); i-- > 0;) cap_after[i] = cap_after[i + 1] + bounds[i];
  bool stop = false;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (stop) return;
    if (i == bounds.size()) {
      if (left == 0 && !visit(e)) stop = true;
      return;
    }
    for (int v = -bounds[i]; v <= bounds[i] && !stop; ++v) {
      int rest = left - std::abs(v);
      if (rest < 0 || rest > cap_after[i + 1]) continue;
      e[i] = v;
      rec(i + 1, rest);
    }
    e[i] = 0;
  };
  rec(0, norm);
}

Expr monomial_of(const std::vector<Expr>& factors, const std::vector<int>& e) {
  std::vector<Expr> fs;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (e[i] != 0) fs.push_back(make_power(factors[i], Rational(e[i])));
  }
  return make_product(fs);
}

struct LinearForm {
  bool linear = false;
  bool homogeneous = false;
  bool first_order = true;
  Expr constant;                                  // the equation at U = 0
  std::vector<std::pair<std::string, Expr>> coef;  // symbol -> coefficient
};

LinearForm linear_form(const Expr& e, const Placeholders& ph, const std::string& unknown) {
  LinearForm lf;
  auto syms = unknown_symbols(e, ph, unknown);
  Bindings zero;
  for (const auto& s : syms) zero[s] = Expr(0);
  lf.constant = simplify(substitute(e, zero));
  for (const auto& s : syms) {
    Expr c = diff(e, s);
    for (const auto& t : free_symbols(c)) {
      if (syms.count(t)) return lf;
    }
    lf.coef.emplace_back(s, simplify(c));
    auto d = ph.decode(s);
    int total = 0;
    for (int k : d->orders) total += k;
    if (total > 1) lf.first_order = false;
  }
  lf.linear = true;
  lf.homogeneous = lf.constant.is_literal_zero() || nf_zero_test(lf.constant) == NFZero::Zero;
  return lf;
}

class Solver {
 public:
  Solver(const std::vector<Expr>& eqs, const Unknown& unknown, const Placeholders& ph,
         const AnsatzOptions& options)
      : ph_(ph), unknown_(unknown), options_(options), checker_(eqs_, unknown, ph, options) {
    for (const auto& e : eqs) {
      Expr s = simplify(e);
      if (s.is_literal_zero()) continue;
      eqs_.push_back(s);
    }
    for (const auto& e : eqs_) forms_.push_back(linear_form(e, ph, unknown.name));
  }

  std::vector<Candidate> run(std::size_t limit) {
    collect(limit);
    if (found_.size() > limit) found_.resize(limit);
    return found_;
  }

 private:
  void collect(std::size_t limit) {
    if (eqs_.empty()) {
      add({Expr(unknown_.may_vanish ? 0 : 1), AnsatzFamily::Monomial});
      return;
    }
    if (unknown_.may_vanish && checker_.exact(Expr(0))) {
      add({Expr(0), AnsatzFamily::Monomial});
      if (found_.size() >= limit) return;
    }
    for (auto family : options_.families) {
      switch (family) {
        case AnsatzFamily::Monomial:
          log_derivative();
          if (found_.empty()) enumerate(limit);
          break;
        case AnsatzFamily::SumOfMonomials:
          linear_span(laurent_basis(options_.sum_exp), options_.sum_terms, family);
          break;
        case AnsatzFamily::PolynomialOfDegree:
          linear_span(polynomial_basis(options_.degree), 0, family);
          break;
      }
      if (!found_.empty()) break;
    }
  }

  void add(const Candidate& c) {
    for (const auto& f : found_) {
      if (f.value == c.value) return;
    }
    found_.push_back(c);
  }

  std::vector<Expr> arg_symbols() const {
    std::vector<Expr> out;
    for (const auto& a : unknown_.args) out.push_back(Expr::symbol(a));
    return out;
  }

  // Exponents of prod F_i^e_i from the logarithmic derivative, for
  // homogeneous first-order linear equations.
  void log_derivative() {
    std::vector<const LinearForm*> usable;
    std::vector<Expr> coefs;
    for (const auto& f : forms_) {
      if (f.linear && f.homogeneous && f.first_order) {
        usable.push_back(&f);
        for (const auto& [s, c] : f.coef) coefs.push_back(c);
      }
    }
    if (usable.empty()) return;
    std::vector<Expr> factors = arg_symbols();
    for (const auto& f : denominator_factors(coefs, unknown_.args, 4)) factors.push_back(f);
    std::size_t n = factors.size();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("ansatze" + std::to_string(i));
    std::vector<std::vector<Expr>> logd(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& a : unknown_.args) logd[i].push_back(simplify(diff(factors[i], a) / factors[i]));
    }
    LinearSystem system(static_cast<int>(n));
    for (const auto* f : usable) {
      // S = A_U + sum over first derivatives A_{U_a} * sum_i e_i dF_i/da / F_i
      Expr constant = Expr(0);
      std::vector<Expr> col(n, Expr(0));
      for (const auto& [s, c] : f->coef) {
        auto d = ph_.decode(s);
        int dir = -1;
        for (std::size_t a = 0; a < d->orders.size(); ++a) {
          if (d->orders[a] == 1) dir = static_cast<int>(a);
        }
        if (dir < 0) {
          constant = constant + c;
        } else {
          for (std::size_t i = 0; i < n; ++i) col[i] = col[i] + c * logd[i][dir];
        }
      }
      std::set<std::string> symbols = free_symbols(constant);
      for (const auto& c : col) {
        auto s = free_symbols(c);
        symbols.insert(s.begin(), s.end());
      }
      NFConverter conv(symbols);
      std::vector<RationalNF> cols;
      try {
        for (const auto& c : col) cols.push_back(conv.convert(simplify(c)));
        if (!add_rows(conv, cols, conv.convert(simplify(constant)), system)) return;
      } catch (const Error&) {
        return;
      }
    }
    auto sol = system.solve(false);
    if (!sol) return;
    std::vector<Expr> fs;
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn((*sol)[i]) != 0) fs.push_back(make_power(factors[i], (*sol)[i]));
    }
    Expr value = simplify(make_product(fs));
    if (checker_.exact(value)) add({value, AnsatzFamily::Monomial});
  }

  void enumerate(std::size_t limit) {
    std::vector<Expr> factors = arg_symbols();
    std::vector<int> bounds(factors.size(), options_.max_exp);
    std::vector<Expr> sources;
    for (const auto& f : forms_) {
      if (f.linear) {
        sources.push_back(f.constant);
        for (const auto& [s, c] : f.coef) sources.push_back(c);
      }
    }
    if (sources.empty()) {
      for (const auto& e : eqs_) {
        Bindings zero;
        for (const auto& s : unknown_symbols(e, ph_, unknown_.name)) zero[s] = Expr(0);
        sources.push_back(simplify(substitute(e, zero)));
      }
    }
    for (const auto& f : denominator_factors(sources, unknown_.args, 2)) {
      factors.push_back(f);
      bounds.push_back(options_.extra_exp);
    }
    Screen screen(eqs_, unknown_, ph_, factors, options_.seed);
    int max_norm = 0;
    for (int b : bounds) max_norm += b;
    int screened = 0;
    for (int norm = 0; norm <= max_norm; ++norm) {
      enumerate_shell(bounds, norm, [&](const std::vector<int>& e) {
        if (++screened > options_.budget) {
          throw SearchBudgetExceeded("ansatz budget exhausted for " + unknown_.name);
        }
        if (screen.usable() && !screen.plausible(e)) return true;
        Expr m = monomial_of(factors, e);
        for (const auto& c : checker_.constants(m)) {
          Expr value = simplify(c * m);
          if (value.is_literal_zero()) continue;
          if (checker_.exact(value)) add({value, AnsatzFamily::Monomial});
        }
        return found_.size() < limit;
      });
      if (!found_.empty()) return;
    }
  }

  std::vector<Expr> laurent_basis(int bound) const {
    std::vector<Expr> out;
    std::vector<int> bounds(unknown_.args.size(), bound);
    std::vector<Expr> factors = arg_symbols();
    int max_norm = bound * static_cast<int>(bounds.size());
    for (int norm = 0; norm <= max_norm; ++norm) {
      enumerate_shell(bounds, norm, [&](const std::vector<int>& e) {
        out.push_back(monomial_of(factors, e));
        return true;
      });
    }
    return out;
  }

  std::vector<Expr> polynomial_basis(int degree) const {
    std::vector<Expr> out;
    std::vector<Expr> factors = arg_symbols();
    std::vector<int> bounds(factors.size(), degree);
    for (int norm = 0; norm <= degree; ++norm) {
      enumerate_shell(bounds, norm, [&](const std::vector<int>& e) {
        for (int v : e) {
          if (v < 0) return true;
        }
        out.push_back(monomial_of(factors, e));
        return true;
      });
    }
    return out;
  }

  // value = sum_j c_j basis_j with the c_j from the linear equations.
  void linear_span(const std::vector<Expr>& basis, int max_terms, AnsatzFamily family) {
    std::vector<const LinearForm*> lin;
    bool homogeneous = true;
    for (const auto& f : forms_) {
      if (!f.linear) continue;
      lin.push_back(&f);
      if (!f.homogeneous) homogeneous = false;
    }
    if (lin.empty()) return;
    int n = static_cast<int>(basis.size());
    LinearSystem system(n);
    for (const auto* f : lin) {
      std::set<std::string> symbols = free_symbols(f->constant);
      for (const auto& [s, c] : f->coef) {
        auto fs = free_symbols(c);
        symbols.insert(fs.begin(), fs.end());
      }
      for (const auto& a : unknown_.args) symbols.insert(a);
      NFConverter conv(symbols);
      try {
        std::vector<RationalNF> coefs;
        for (const auto& [s, c] : f->coef) coefs.push_back(conv.convert(c));
        std::vector<RationalNF> cols;
        for (const auto& m : basis) {
          RationalNF col = conv.constant(0);
          for (std::size_t k = 0; k < f->coef.size(); ++k) {
            Expr dm = substitute_unknown(Expr::symbol(f->coef[k].first), ph_, unknown_.name, m);
            col = conv.add(col, conv.mul(coefs[k], conv.convert(dm)));
          }
          cols.push_back(col);
        }
        if (!add_rows(conv, cols, conv.convert(f->constant), system)) return;
      } catch (const Error&) {
        return;
      }
    }
    auto sol = system.solve(homogeneous);
    if (!sol) return;
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j) {
      if (sgn((*sol)[j]) != 0) terms.push_back(Expr((*sol)[j]) * basis[j]);
    }
    if (terms.empty() && !unknown_.may_vanish) return;
    if (max_terms > 0 && static_cast<int>(terms.size()) > max_terms) return;
    Expr value = simplify(make_sum(terms));
    if (checker_.exact(value)) add({value, family});
  }

  std::vector<Expr> eqs_;
  std::vector<LinearForm> forms_;
  const Placeholders& ph_;
  const Unknown& unknown_;
  const AnsatzOptions& options_;
  Checker checker_;
  std::vector<Candidate> found_;
};

}  // namespace

std::vector<Candidate> solve_unknown(const std::vector<Expr>& equations, const Unknown& unknown,
                                     const Placeholders& ph, const AnsatzOptions& options,
                                     std::size_t limit) {
  Solver solver(equations, unknown, ph, options);
  return solver.run(std::max<std::size_t>(limit, 1));
}

bool satisfies(const DeterminingSystem& sys, const Bindings& values, const ZeroTestOptions& options) {
  Placeholders ph = sys.placeholders();
  Bindings all = sys.fixed;
  for (const auto& [k, v] : values) all[k] = v;
  for (const auto& eq : sys.equations) {
    Expr r = simplify(substitute_unknowns(eq.expr, ph, all));
    for (const auto& s : free_symbols(r)) {
      if (ph.decode(s)) return false;
    }
    if (r.is_literal_zero()) continue;
    try {
      if (is_zero(r, options) != ZeroResult::Zero) return false;
    } catch (const EvaluationDomain&) {
      return false;
    }
  }
  return true;
}

AnsatzResult solve_ansatz(const DeterminingSystem& sys, const AnsatzOptions& options) {
  AnsatzResult result;
  Placeholders ph = sys.placeholders();
  std::size_t deepest = 0;
  Bindings deepest_values;
  std::string deepest_unknown;

  std::function<bool(std::size_t, Bindings&)> dfs = [&](std::size_t i, Bindings& values) -> bool {
    while (i < sys.unknowns.size() && sys.fixed.count(sys.unknowns[i].name)) ++i;
    if (i == sys.unknowns.size()) return true;
    const Unknown& u = sys.unknowns[i];
    Bindings known = sys.fixed;
    for (const auto& [k, v] : values) known[k] = v;
    std::vector<Expr> eqs;
    for (const auto& e : sys.equations_for(u.name)) eqs.push_back(simplify(substitute_unknowns(e, ph, known)));
    std::vector<Candidate> cands;
    try {
      cands = solve_unknown(eqs, u, ph, options, static_cast<std::size_t>(options.alternates));
    } catch (const SearchBudgetExceeded&) {
      cands.clear();
    }
    if (!result.alternates.count(u.name) && cands.size() > 1) {
      for (std::size_t k = 1; k < cands.size(); ++k) result.alternates[u.name].push_back(cands[k].value);
    }
    if (cands.empty() && (i >= deepest || deepest_unknown.empty())) {
      deepest = i;
      deepest_values = values;
      deepest_unknown = u.name;
    }
    for (const auto& c : cands) {
      values[u.name] = c.value;
      result.families[u.name] = c.family;
      if (dfs(i + 1, values)) return true;
      values.erase(u.name);
    }
    return false;
  };

  Bindings values;
  if (dfs(0, values)) {
    result.solved = true;
    result.values = values;
    return result;
  }
  result.failed_unknown = deepest_unknown;
  result.residual = sys;
  for (const auto& [k, v] : deepest_values) result.residual.fixed[k] = v;
  result.values = deepest_values;
  return result;
}

}  // namespace trilin
