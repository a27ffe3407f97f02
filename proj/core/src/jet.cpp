#include "trilin/jet.hpp"

#include <cmath>

#include "trilin/errors.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {

namespace {

const Expr kX = Expr::symbol("x");
const Expr kU = Expr::symbol("u");
const Expr kP = Expr::symbol("p");
const Expr kQ = Expr::symbol("q");

Expr dx_once(const JetContext& ctx, const Expr& e, const Placeholders* unknowns) {
  return diff_raw(e, "x", unknowns) + kP * diff_raw(e, "u", unknowns) +
         kQ * diff_raw(e, "p", unknowns) + ctx.f * diff_raw(e, "q", unknowns);
}

// Exponent of v in a single factor, or nullopt when v sits deeper.
std::optional<Rational> factor_degree(const Expr& f, const std::string& v) {
  if (f.is_symbol()) return f.name() == v ? Rational(1) : Rational(0);
  if (f.is(Kind::Power) && f.base().is_symbol()) {
    return f.base().name() == v ? f.exponent() : Rational(0);
  }
  if (depends_on(f, v)) return std::nullopt;
  return Rational(0);
}

std::optional<Rational> term_degree(const Expr& t, const std::string& v) {
  if (!t.is(Kind::Product)) return factor_degree(t, v);
  Rational d = 0;
  for (const auto& f : t.operands()) {
    auto fd = factor_degree(f, v);
    if (!fd) return std::nullopt;
    d += *fd;
  }
  return d;
}

}  // namespace

Expr total_derivative(const JetContext& ctx, const Expr& e, int n, const Placeholders* unknowns) {
  if (n < 1) throw Error("total_derivative needs n >= 1");
  Expr out = e;
  for (int i = 0; i < n; ++i) out = simplify(dx_once(ctx, out, unknowns));
  return out;
}

PointTransformation::PointTransformation(Expr phi_, Expr psi_)
    : phi(std::move(phi_)), psi(std::move(psi_)) {
  for (const auto& e : {phi, psi}) {
    if (depends_on(e, "p") || depends_on(e, "q")) {
      throw DegenerateTransformation("point transformations depend on x and u only");
    }
  }
  jacobian = normalize(diff(phi, "x") * diff(psi, "u") - diff(phi, "u") * diff(psi, "x"));
}

Prolongation prolong(const JetContext& ctx, const PointTransformation& t) {
  Expr dphi = total_derivative(ctx, t.phi);
  if (dphi.is_literal_zero() || nf_zero_test(dphi) == NFZero::Zero) {
    throw DegenerateTransformation("D_x phi vanishes identically");
  }
  Prolongation pr;
  pr.ubar1 = simplify(total_derivative(ctx, t.psi) / dphi);
  pr.ubar2 = simplify(total_derivative(ctx, pr.ubar1) / dphi);
  return pr;
}

std::string to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Verified:
      return "Verified";
    case VerifyStatus::Refuted:
      return "Refuted";
    case VerifyStatus::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

ZeroTestOptions verify_options(const JetContext& ctx, const ZeroTestOptions& base) {
  ZeroTestOptions o = base;
  if (ctx.singular_hint) {
    o.singular_hint = o.singular_hint ? *o.singular_hint * *ctx.singular_hint : *ctx.singular_hint;
  }
  return o;
}

Bindings pullback_bindings(const PointTransformation& t, const Prolongation& pr) {
  return {{"xbar", t.phi}, {"ubar", t.psi}, {"pbar", pr.ubar1}, {"qbar", pr.ubar2}};
}

VerifyResult verify_pulled_back(const JetContext& ctx, const PointTransformation& t,
                                const Expr& fbar_source, const ZeroTestOptions& options) {
  Prolongation pr = prolong(ctx, t);
  Expr dphi = total_derivative(ctx, t.phi);
  VerifyResult r;
  r.residual = simplify(total_derivative(ctx, pr.ubar2) - fbar_source * dphi);
  ZeroTestOptions o = verify_options(ctx, options);
  Expr hint = dphi * t.jacobian;
  o.singular_hint = o.singular_hint ? *o.singular_hint * hint : hint;
  ZeroDecision d = decide_zero(r.residual, o);
  switch (d.result) {
    case ZeroResult::Zero:
      r.status = VerifyStatus::Verified;
      break;
    case ZeroResult::NonZero:
      r.status = VerifyStatus::Refuted;
      r.witness = d.witness;
      if (!r.witness) {
        // Exact refutation: find a concrete point for the report.
        RationalSampler sampler(o.seed);
        auto symbols = free_symbols(r.residual);
        for (int attempt = 0; attempt < o.max_attempts && !r.witness; ++attempt) {
          Point point;
          for (const auto& s : symbols) point[s] = sampler.next(attempt >= o.max_attempts / 2);
          try {
            if (o.singular_hint && eval(*o.singular_hint, point).is_zero()) continue;
            Value v = eval(r.residual, point);
            if (std::abs(static_cast<double>(v.approx())) > o.reject_tol) r.witness = point;
          } catch (const Error&) {
          }
        }
      }
      break;
    case ZeroResult::Unknown:
      r.status = VerifyStatus::Unknown;
      break;
  }
  return r;
}

VerifyResult verify_transformation(const JetContext& ctx, const PointTransformation& t,
                                   const Expr& fbar, const ZeroTestOptions& options) {
  Prolongation pr = prolong(ctx, t);
  Expr pulled = substitute_raw(fbar, pullback_bindings(t, pr));
  return verify_pulled_back(ctx, t, pulled, options);
}

PointTransformation compose(const PointTransformation& outer, const PointTransformation& inner) {
  Bindings b{{"x", inner.phi}, {"u", inner.psi}};
  return PointTransformation(simplify(assume_positive(substitute_raw(outer.phi, b))),
                             simplify(assume_positive(substitute_raw(outer.psi, b))));
}

std::optional<Expr> solve_for(const Expr& equation, const std::string& v) {
  Expr g = equation;
  try {
    g = numerator_denominator(simplify(equation)).first;
  } catch (const Error&) {
    g = normalize(equation);
  }
  if (!depends_on(g, v)) return std::nullopt;
  std::vector<Expr> terms = g.is(Kind::Sum) ? g.operands() : std::vector<Expr>{g};
  std::optional<Rational> n;
  std::vector<Expr> coef;
  std::vector<Expr> rest;
  for (const auto& t : terms) {
    auto d = term_degree(t, v);
    if (!d) return std::nullopt;
    if (sgn(*d) == 0) {
      rest.push_back(t);
      continue;
    }
    if (n && *n != *d) return std::nullopt;
    n = *d;
    coef.push_back(normalize(t * make_power(Expr::symbol(v), -*d)));
  }
  if (!n) return std::nullopt;
  Expr c = make_sum(coef);
  if (c.is_literal_zero()) return std::nullopt;
  Expr value = simplify(-make_sum(rest) / c);
  if (*n != 1) value = simplify(assume_positive(make_power(value, 1 / *n)));
  return value;
}

PointTransformation invert(const PointTransformation& t, const ZeroTestOptions& options) {
  const Expr xb = Expr::symbol("xbar");
  const Expr ub = Expr::symbol("ubar");
  std::vector<Expr> eqs{xb - t.phi, ub - t.psi};
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (const std::string v : {"x", "u"}) {
        const std::string w = v == "x" ? "u" : "x";
        if (pass == 0 && depends_on(eqs[i], w)) continue;
        auto first = solve_for(eqs[i], v);
        if (!first) continue;
        Expr other = simplify(substitute(eqs[1 - i], {{v, *first}}));
        auto second = solve_for(other, w);
        if (!second || depends_on(*second, v)) continue;
        Expr vv = simplify(assume_positive(substitute(*first, {{w, *second}})));
        Bindings back{{v, vv}, {w, *second}};
        // The inverse must really invert; wrong root branches are rejected.
        Expr r1 = simplify(substitute(t.phi, back) - xb);
        Expr r2 = simplify(substitute(t.psi, back) - ub);
        ZeroTestOptions o = options;
        if (is_zero(r1, o) != ZeroResult::Zero || is_zero(r2, o) != ZeroResult::Zero) continue;
        Bindings rename{{"xbar", kX}, {"ubar", kU}};
        Expr phi = v == "x" ? vv : *second;
        Expr psi = v == "x" ? *second : vv;
        return PointTransformation(substitute(phi, rename), substitute(psi, rename));
      }
    }
  }
  throw NoClosedFormInverse("no closed-form inverse found for the point transformation");
}

Expr unbar(const Expr& e) {
  return substitute_raw(e, {{"xbar", kX}, {"ubar", kU}, {"pbar", kP}, {"qbar", kQ}});
}

Expr bar(const Expr& e) {
  return substitute_raw(e, {{"x", Expr::symbol("xbar")},
                        {"u", Expr::symbol("ubar")},
                        {"p", Expr::symbol("pbar")},
                        {"q", Expr::symbol("qbar")}});
}

Expr pushforward(const JetContext& ctx, const PointTransformation& t,
                 const ZeroTestOptions& options) {
  Prolongation pr = prolong(ctx, t);
  Expr dphi = total_derivative(ctx, t.phi);
  Expr fbar_source = simplify(total_derivative(ctx, pr.ubar2) / dphi);
  PointTransformation inv = invert(t, options);

  const Expr pb = Expr::symbol("pbar");
  const Expr qb = Expr::symbol("qbar");
  Expr phi_x = diff(t.phi, "x");
  Expr phi_u = diff(t.phi, "u");
  Expr psi_x = diff(t.psi, "x");
  Expr psi_u = diff(t.psi, "u");
  Expr p_of = simplify((pb * phi_x - psi_x) / (psi_u - pb * phi_u));
  Expr u1_p = diff(pr.ubar1, "p");
  Expr q_of = simplify((qb * dphi - diff(pr.ubar1, "x") - kP * diff(pr.ubar1, "u")) / u1_p);

  Expr e = simplify(substitute_raw(fbar_source, {{"q", q_of}}));
  e = simplify(substitute_raw(e, {{"p", p_of}}));
  Bindings back{{"x", bar(inv.phi)}, {"u", bar(inv.psi)}};
  e = simplify(assume_positive(substitute_raw(e, back)));
  return e;
}

}  // namespace trilin
