#include "trilin/invariants.hpp"

#include "trilin/rational_nf.hpp"

namespace trilin {

namespace {

Expr pd(const Expr& e, const char* v) { return simplify(diff_raw(e, v)); }

}  // namespace

std::string to_string(JScaling s) {
  return s == JScaling::LaguerreForsyth ? "laguerre-forsyth" : "yumaguzhin";
}

Rational scaling_factor(JScaling s) {
  return s == JScaling::LaguerreForsyth ? Rational(1, 54) : Rational(-1, 27);
}

std::vector<std::pair<std::string, Expr>> InvariantReport::fields() const {
  std::vector<std::pair<std::string, Expr>> out{{"W", W}, {"I1", I1}, {"I2", I2}};
  if (j_applicable) {
    out.insert(out.end(), {{"J", J}, {"I4", I4}, {"I5", I5}, {"I6", I6}});
  }
  out.emplace_back("I7", I7);
  if (j_applicable) {
    out.insert(out.end(), {{"I8", I8},
                           {"K", K},
                           {"DxK", DxK},
                           {"I9", I9},
                           {"I10", I10},
                           {"I11", I11},
                           {"I12", I12},
                           {"Ku", Ku}});
  }
  return out;
}

Expr compute_W(const JetContext& ctx) {
  const Expr& f = ctx.f;
  Expr fq = pd(f, "q");
  Expr fp = pd(f, "p");
  Expr fu = pd(f, "u");
  Expr dfq = total_derivative(ctx, fq);
  Expr d2fq = total_derivative(ctx, dfq);
  Expr dfp = total_derivative(ctx, fp);
  return simplify(4 * pow(fq, 3) + 18 * fq * (fp - dfq) + 9 * d2fq - 27 * dfp + 54 * fu);
}

Expr compute_J(const Expr& W, JScaling scaling) {
  return simplify(make_power(simplify(W * Expr(scaling_factor(scaling))), Rational(1, 3)));
}

Expr compute_I8(const JetContext& ctx, const Expr& J) {
  Expr fq = pd(ctx.f, "q");
  Expr fp = pd(ctx.f, "p");
  Expr dJ = total_derivative(ctx, J);
  Expr d2J = total_derivative(ctx, dJ);
  Expr e = (pow(fq, 2) + 3 * fp - 3 * total_derivative(ctx, fq)) * pow(J, 2) + 6 * J * d2J -
           9 * pow(dJ, 2);
  return simplify(Expr(Rational(1, 3)) * e);
}

InvariantReport compute_report(const JetContext& ctx, JScaling scaling,
                               const ZeroTestOptions& options) {
  ZeroTestOptions o = verify_options(ctx, options);
  InvariantReport r;
  r.scaling = scaling;
  const Expr& f = ctx.f;
  Expr fq = pd(f, "q");
  Expr fp = pd(f, "p");
  Expr fqq = pd(fq, "q");
  r.W = compute_W(ctx);
  r.I1 = simplify(pd(fqq, "q"));
  r.I2 = simplify(pow(fqq, 2) + 6 * pd(fqq, "p"));
  r.I7 = simplify(fqq * (pow(fq, 2) + 9 * fp - 3 * total_derivative(ctx, fq)) -
                  9 * pd(fp, "p") + 18 * pd(fq, "u") - 6 * fq * pd(fp, "q"));
  auto flag = [&](const std::string& name, const Expr& e) {
    r.zero_flags[name] = is_zero(e, o);
  };
  flag("W", r.W);
  flag("I1", r.I1);
  flag("I2", r.I2);
  flag("I7", r.I7);
  if (r.zero_flags["W"] == ZeroResult::Zero) return r;

  r.j_applicable = true;
  r.J = compute_J(r.W, scaling);
  r.I4 = simplify(pd(r.J, "q"));
  r.I5 = simplify(fqq * r.J - 6 * pd(r.J, "p"));
  r.I6 = simplify(pd(r.J, "u") - total_derivative(ctx, pd(r.J, "p")));
  r.I8 = compute_I8(ctx, r.J);
  r.K = simplify(r.I8 / pow(r.J, 4));
  r.DxK = simplify(total_derivative(ctx, r.K));
  r.I9 = simplify(pd(r.K, "q"));
  r.I10 = simplify(pd(r.K, "p"));
  r.Ku = simplify(pd(r.K, "u"));
  r.I11 = simplify(fqq * r.DxK - 6 * r.Ku);
  r.I12 = simplify(pd(r.K, "x"));
  for (const auto& [name, e] : r.fields()) {
    if (!r.zero_flags.count(name)) flag(name, e);
  }
  return r;
}

Consistency check_K_consistency(const InvariantReport& report, const Expr& a,
                                const ZeroTestOptions& options) {
  if (!report.j_applicable) {
    return is_zero(a, options) == ZeroResult::Zero ? Consistency::Consistent
                                                   : Consistency::Inconsistent;
  }
  Expr a1 = diff(a, "x");
  Expr a2 = diff(a1, "x");
  Expr expected = (2 * a * a2 - 3 * pow(a1, 2)) / pow(a, 4);
  return is_zero(simplify(report.K - expected), options) == ZeroResult::Zero
             ? Consistency::Consistent
             : Consistency::Inconsistent;
}

}  // namespace trilin
