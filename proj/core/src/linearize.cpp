#include "trilin/linearize.hpp"

#include <cctype>
#include <cmath>

#include "trilin/eval.hpp"
#include "trilin/invariants.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {

std::string to_string(Target t) {
  switch (t) {
    case Target::Auto:
      return "auto";
    case Target::Seven:
      return "seven";
    case Target::Five:
      return "five";
    case Target::LaguerreForsyth:
      return "laguerre-forsyth";
    case Target::Yumaguzhin:
      return "yumaguzhin";
  }
  return "auto";
}

std::optional<Target> parse_target(const std::string& name) {
  for (auto t : {Target::Auto, Target::Seven, Target::Five, Target::LaguerreForsyth,
                 Target::Yumaguzhin}) {
    if (to_string(t) == name) return t;
  }
  if (name == "lf" || name == "laguerre") return Target::LaguerreForsyth;
  return std::nullopt;
}

namespace {

const Expr kX = Expr::symbol("x");
const Expr kU = Expr::symbol("u");
const Expr kP = Expr::symbol("p");
const Expr kQ = Expr::symbol("q");
const Expr kXbar = Expr::symbol("xbar");
const Expr kUbar = Expr::symbol("ubar");
const Expr kPbar = Expr::symbol("pbar");

Expr jacobian(const Placeholders& ph) {
  auto s = [&](const std::string& n, int dx, int du) { return Expr::symbol(ph.encode(n, {dx, du})); };
  return s("phi", 1, 0) * s("psi", 0, 1) - s("phi", 0, 1) * s("psi", 1, 0);
}

void add(DeterminingSystem& sys, const Expr& e, const std::string& solves, const std::string& origin) {
  sys.equations.push_back({simplify(e), solves, origin});
}

DeterminingSystem seven_system(const JetContext& ctx) {
  DeterminingSystem sys;
  sys.branch = to_string(Target::Seven);
  sys.params = ctx.params;
  sys.unknowns = {{"a3", {"x", "u", "p"}, false},
                  {"A", {"x", "u", "p"}, true},
                  {"a1", {"x", "u", "p"}, false},
                  {"phi", {"x", "u"}, false},
                  {"psi", {"x", "u"}, false}};
  Placeholders ph = sys.placeholders();
  const Expr& f = ctx.f;
  Expr fq = diff(f, "q");
  Expr fp = diff(f, "p");
  Expr fqq = diff(fq, "q");
  Expr a3 = Expr::symbol("a3");
  Expr a1 = Expr::symbol("a1");
  Expr a2 = -Expr(Rational(1, 6)) * a3 * fqq * kQ + Expr::symbol("A");
  auto D = [&](const Expr& e) { return total_derivative(ctx, e, 1, &ph); };
  add(sys, D(a3) + Expr(Rational(1, 3)) * fq * a3, "a3", "third-order coefficient");
  add(sys,
      D(a2) - pow(a2, 2) / (2 * a3) +
          a3 / 18 * (2 * pow(fq, 2) + 9 * fp - 3 * total_derivative(ctx, fq)),
      "A", "second-order coefficient");
  add(sys, D(a1) - a2 / a3 * a1, "a1", "first-order coefficient");
  add(sys, diff(diff(a1 / a3, "p", &ph), "p", &ph), "a1", "phi'' free of q");
  add(sys, diff(pow(a1, 2) / a3, "p", &ph), "a1", "jacobian free of p");
  add(sys, D(Expr::symbol("phi")) - a1 / a3, "phi", "total derivative of phi");
  add(sys, jacobian(ph) - pow(a1, 2) / a3, "psi", "jacobian");
  return sys;
}

DeterminingSystem five_system(const JetContext& ctx, const InvariantReport& r) {
  DeterminingSystem sys;
  sys.branch = to_string(Target::Five);
  sys.params = ctx.params;
  sys.unknowns = {{"a1", {"x", "u", "p"}, false}, {"phi", {"x", "u"}, false}, {"psi", {"x", "u"}, false}};
  Placeholders ph = sys.placeholders();
  const Expr& J = r.J;
  Expr fq = diff(ctx.f, "q");
  Expr a1 = Expr::symbol("a1");
  Expr dJ = total_derivative(ctx, J);
  add(sys, total_derivative(ctx, a1, 1, &ph) - (3 * dJ - J * fq) / (3 * J) * a1, "a1",
      "first-order coefficient");
  add(sys, total_derivative(ctx, Expr::symbol("phi"), 1, &ph) - J, "phi", "total derivative of phi");
  add(sys, jacobian(ph) - J * a1, "psi", "jacobian");
  sys.data = {{"J", J}, {"K", r.K}, {"s", simplify(r.K)}};
  return sys;
}

DeterminingSystem lf_system(const JetContext& ctx, const InvariantReport& r) {
  DeterminingSystem sys;
  sys.branch = to_string(Target::LaguerreForsyth);
  sys.params = ctx.params;
  sys.unknowns = {{"H", {"x", "u"}, false},
                  {"b", {"x", "u"}, false},
                  {"a1", {"x", "u", "p"}, false},
                  {"phi", {"x", "u"}, false},
                  {"psi", {"x", "u"}, false}};
  Placeholders ph = sys.placeholders();
  const Expr& J = r.J;
  Expr fq = diff(ctx.f, "q");
  Expr H = Expr::symbol("H");
  Expr b = Expr::symbol("b");
  Expr a1 = Expr::symbol("a1");
  auto D = [&](const Expr& e) { return total_derivative(ctx, e, 1, &ph); };
  add(sys, 2 / J * D(H) + pow(H, 2) - r.K, "H", "riccati equation for H");
  add(sys, D(b) - J * H * b, "b", "coefficient b");
  add(sys, D(a1) - (total_derivative(ctx, J) / J - fq / 3 - J * H) * a1, "a1",
      "first-order coefficient");
  add(sys, D(Expr::symbol("phi")) - J / b, "phi", "total derivative of phi");
  add(sys, jacobian(ph) - J * a1 / b, "psi", "jacobian");
  sys.data = {{"J", J}, {"K", r.K}};
  return sys;
}

DeterminingSystem yum_system(const JetContext& ctx, const InvariantReport& r, int sign) {
  DeterminingSystem sys;
  sys.branch = to_string(Target::Yumaguzhin);
  sys.params = ctx.params;
  sys.unknowns = {{"a1", {"x", "u", "p"}, false}, {"phi", {"x", "u"}, false}, {"psi", {"x", "u"}, false}};
  Placeholders ph = sys.placeholders();
  const Expr& J = r.J;
  const Expr& K = r.K;
  const Expr& DK = r.DxK;
  Expr fq = diff(ctx.f, "q");
  Expr a1 = Expr::symbol("a1");
  Expr psi_x = Expr::symbol(ph.encode("psi", {1, 0}));
  Expr psi_u = Expr::symbol(ph.encode("psi", {0, 1}));
  Expr ratio = simplify(total_derivative(ctx, simplify(J / DK)));
  add(sys,
      total_derivative(ctx, a1, 1, &ph) -
          (total_derivative(ctx, J) / J - fq / 3 - DK / J * ratio) * a1,
      "a1", "first-order coefficient");
  add(sys, diff(K, "x") * psi_u - diff(K, "u") * psi_x - a1 * DK, "psi", "jacobian");
  sys.fixed = {{"phi", simplify(Expr(sign) * K)}};
  sys.data = {{"J", J}, {"K", K}, {"DxK", DK}, {"sign", Expr(sign)}};
  return sys;
}

SymmetryClass checked_class(const JetContext& ctx, const ZeroTestOptions& zero) {
  SymmetryClass c = classify(ctx, zero);
  if (c.verdict == Verdict::NotLinearizable) throw NotLinearizable(c);
  if (c.verdict == Verdict::Indeterminate) throw IndeterminateClass(c);
  return c;
}

Target resolve(Target requested, Verdict v) {
  Target natural = v == Verdict::Seven  ? Target::Seven
                   : v == Verdict::Five ? Target::Five
                                        : Target::LaguerreForsyth;
  if (requested == Target::Auto) return natural;
  bool ok = requested == natural ||
            (v == Verdict::Four && requested == Target::Yumaguzhin);
  if (!ok) {
    std::string v_name = v == Verdict::Seven ? "seven" : v == Verdict::Five ? "five" : "four";
    throw WrongBranch("target " + to_string(requested) + " does not apply: the equation has " +
                      v_name + " point symmetries, use target " + to_string(natural));
  }
  return requested;
}

// e = k * v^n with k free of the jet variables.
std::optional<std::pair<Expr, Rational>> monomial_in(const Expr& e, const std::string& v) {
  for (const auto& s : {"x", "u", "p", "q"}) {
    if (s != v && depends_on(e, s)) return std::nullopt;
  }
  Expr n = simplify(Expr::symbol(v) * diff(e, v) / e);
  if (!n.is_rational()) return std::nullopt;
  Expr k = simplify(e / make_power(Expr::symbol(v), n.value()));
  for (const auto& s : {"x", "u", "p", "q"}) {
    if (depends_on(k, s)) return std::nullopt;
  }
  return std::make_pair(k, n.value());
}

std::optional<long double> numeric(const Expr& e) {
  if (!free_symbols(e).empty()) return std::nullopt;
  try {
    return eval_float(e, {});
  } catch (const Error&) {
    return std::nullopt;
  }
}

// gbar(xbar) from phi = k v^n and G = c v^e. With n < 0 the coefficient is
// written through (k/xbar)^(e/|n|); a negative k contributes (-1)^m.
std::optional<GCoefficient> explicit_g(const Expr& phi, const Expr& G) {
  for (const std::string v : {"x", "u"}) {
    auto pk = monomial_in(phi, v);
    auto gc = monomial_in(G, v);
    if (!pk || !gc || sgn(pk->second) == 0) continue;
    auto [k, n] = *pk;
    auto [c, e] = *gc;
    Rational m = sgn(n) > 0 ? Rational(e / n) : Rational(e / Rational(-n));
    m.canonicalize();
    auto kv = numeric(k);
    if (!kv) return std::nullopt;
    GCoefficient out;
    Expr base = k;
    Rational phase = 1;
    if (*kv < 0) {
      base = simplify(-k);
      const Integer& den = m.get_den();
      Integer num = m.get_num();
      bool odd = mpz_odd_p(num.get_mpz_t()) != 0;
      if (den == 2) {
        // i^num
        Integer r = num % 4;
        if (r < 0) r += 4;
        out.imaginary = true;
        phase = r == 1 ? 1 : -1;
      } else if (mpz_odd_p(den.get_mpz_t())) {
        phase = odd ? -1 : 1;
      } else {
        return std::nullopt;
      }
    }
    Expr scaled = sgn(n) > 0 ? make_power(base, Rational(-m)) * make_power(kXbar, m)
                             : make_power(base, m) * make_power(kXbar, Rational(-m));
    out.value = simplify(Expr(phase) * c * scaled);
    return out;
  }
  return std::nullopt;
}

Expr sign_of(const DeterminingSystem& sys) {
  auto it = sys.data.find("sign");
  return it == sys.data.end() ? Expr(1) : it->second;
}

Expr data(const DeterminingSystem& sys, const std::string& key) {
  auto it = sys.data.find(key);
  if (it == sys.data.end()) throw Error("determining system lacks '" + key + "'");
  return it->second;
}

Expr yum_rhs(const Expr& sign, const Expr& g) {
  auto d = [](const Expr& e) { return diff(e, "xbar"); };
  Expr l = simplify(d(g) / g);
  Expr A = simplify(sign * kXbar * pow(g, 2) - 2 * d(l) + pow(l, 2));
  return simplify(A * kPbar + Expr(Rational(1, 2)) * (d(A) - pow(g, 3)) * kUbar);
}

void settle(const JetContext& ctx, const DeterminingSystem& sys, const Bindings& all,
            const PointTransformation& t, const ZeroTestOptions& zero, LinearizationResult& r);

// w(x) with w''' = F(x, w, w', w'') for the linear image u''' = F of ctx
// under t, or nullopt when the image is homogeneous or no ansatz fits.
std::optional<Expr> particular_solution(const JetContext& ctx, const PointTransformation& t,
                                        const LinearizeOptions& options) {
  Expr F;
  try {
    F = unbar(pushforward(ctx, t, options.zero));
  } catch (const Error&) {
    return std::nullopt;
  }
  Expr r0 = simplify(substitute(F, {{"u", Expr(0)}, {"p", Expr(0)}, {"q", Expr(0)}}));
  if (r0.is_literal_zero()) return std::nullopt;
  Placeholders ph;
  ph.declare("w", {"x"});
  auto d = [&](int k) { return Expr::symbol(ph.encode("w", {k})); };
  Expr eq = simplify(d(3) - substitute(F, {{"u", d(0)}, {"p", d(1)}, {"q", d(2)}}));
  std::vector<Candidate> found;
  try {
    found = solve_unknown({eq}, Unknown{"w", {"x"}, true}, ph, options.ansatz, 1);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (found.empty()) return std::nullopt;
  return found.front().value;
}

LinearizationResult finish(const JetContext& ctx, const DeterminingSystem& sys,
                           const Bindings& values, const LinearizeOptions& options) {
  LinearizationResult r;
  r.system = sys;
  r.target = *parse_target(sys.branch);
  r.verdict = r.target == Target::Seven  ? Verdict::Seven
              : r.target == Target::Five ? Verdict::Five
                                         : Verdict::Four;
  Bindings all = sys.fixed;
  for (const auto& [k, v] : values) all[k] = v;
  if (!all.count("phi") || !all.count("psi")) throw Error("phi and psi are required");
  for (const auto& [k, v] : all) {
    if (k != "phi" && k != "psi") r.auxiliaries[k] = v;
  }
  PointTransformation t(all.at("phi"), all.at("psi"));
  ZeroTestOptions zero = verify_options(ctx, options.zero);
  settle(ctx, sys, all, t, zero, r);
  if (r.verification.status == VerifyStatus::Verified) return r;
  auto w = particular_solution(ctx, t, options);
  if (!w) return r;
  PointTransformation shifted(t.phi, simplify(t.psi - substitute(*w, {{"x", t.phi}})));
  LinearizationResult second = r;
  settle(ctx, sys, all, shifted, zero, second);
  if (second.verification.status == VerifyStatus::Verified) r = std::move(second);
  return r;
}

void settle(const JetContext& ctx, const DeterminingSystem& sys, const Bindings& all,
            const PointTransformation& t, const ZeroTestOptions& zero, LinearizationResult& r) {
  r.transformation = t;
  switch (r.target) {
    case Target::Auto:
    case Target::Seven:
      r.fbar = Expr(0);
      r.verification = verify_transformation(ctx, t, r.fbar, zero);
      break;
    case Target::Five:
      r.s = data(sys, "s");
      r.fbar = simplify(r.s * kPbar + kUbar);
      r.verification = verify_transformation(ctx, t, r.fbar, zero);
      break;
    case Target::LaguerreForsyth: {
      r.K = data(sys, "K");
      const Expr& b = all.at("b");
      for (const std::string v : {"x", "u"}) {
        std::string other = v == "x" ? "u" : "x";
        if (depends_on(t.phi, other) || !depends_on(t.phi, v)) continue;
        auto inv = solve_for(kXbar - t.phi, v);
        if (!inv) break;
        Expr a = simplify(substitute(b, {{v, *inv}}));
        if (depends_on(a, other)) break;
        r.a = a;
      }
      if (r.a) {
        r.fbar = simplify(pow(*r.a, 3) * kUbar);
        r.verification = verify_transformation(ctx, t, r.fbar, zero);
      } else {
        r.explicit_target = false;
        r.fbar = simplify(pow(b, 3) * t.psi);
        r.verification = verify_pulled_back(ctx, t, r.fbar, zero);
      }
      break;
    }
    case Target::Yumaguzhin: {
      r.K = data(sys, "K");
      Expr sign = sign_of(sys);
      r.sign = sign.is_rational() && sgn(sign.value()) < 0 ? -1 : 1;
      Expr J = data(sys, "J");
      Expr DK = data(sys, "DxK");
      Expr G = simplify(sign * J / DK);
      r.g = explicit_g(t.phi, G);
      Expr phi_other = simplify(-t.phi);
      r.g_other = explicit_g(phi_other, simplify(-G));
      if (r.g && !r.g->imaginary) {
        r.fbar = yum_rhs(sign, r.g->value);
        r.verification = verify_transformation(ctx, t, r.fbar, zero);
      } else {
        Expr dphi = simplify(total_derivative(ctx, t.phi));
        auto Dbar = [&](const Expr& e) { return simplify(total_derivative(ctx, e) / dphi); };
        Expr l = simplify(Dbar(G) / G);
        Expr A = simplify(sign * t.phi * pow(G, 2) - 2 * Dbar(l) + pow(l, 2));
        Prolongation pr = prolong(ctx, t);
        r.explicit_target = false;
        r.fbar = simplify(A * pr.ubar1 + Expr(Rational(1, 2)) * (Dbar(A) - pow(G, 3)) * t.psi);
        r.verification = verify_pulled_back(ctx, t, r.fbar, zero);
      }
      break;
    }
  }
}

int choose_sign(const InvariantReport& r) {
  Expr G = simplify(r.J / r.DxK);
  auto plus = explicit_g(r.K, G);
  if (!plus || !plus->imaginary) return 1;
  auto minus = explicit_g(simplify(-r.K), simplify(-G));
  if (minus && !minus->imaginary) return -1;
  return 1;
}

DeterminingSystem build(const JetContext& ctx, const SymmetryClass& c, Target target, int sign,
                        const ZeroTestOptions& zero) {
  switch (target) {
    case Target::Auto:
    case Target::Seven:
      return seven_system(ctx);
    case Target::Five:
      return five_system(ctx, c.report);
    case Target::LaguerreForsyth:
      return lf_system(ctx, c.report);
    case Target::Yumaguzhin: {
      InvariantReport r = compute_report(ctx, JScaling::Yumaguzhin, zero);
      return yum_system(ctx, r, sign == 0 ? choose_sign(r) : sign);
    }
  }
  return seven_system(ctx);
}

}  // namespace

DeterminingSystem determining_system(const JetContext& ctx, Target target, int sign,
                                     const ZeroTestOptions& zero) {
  SymmetryClass c = checked_class(ctx, zero);
  return build(ctx, c, resolve(target, c.verdict), sign, zero);
}

LinearizationResult linearize(const JetContext& ctx, const LinearizeOptions& options) {
  SymmetryClass c = checked_class(ctx, options.zero);
  Target target = resolve(options.target, c.verdict);
  DeterminingSystem sys = build(ctx, c, target, options.sign, options.zero);
  AnsatzOptions ao = options.ansatz;
  AnsatzResult ar = solve_ansatz(sys, ao);
  if (!ar.solved) throw AnsatzFailed(ar.residual, ar.failed_unknown);
  LinearizationResult r = finish(ctx, sys, ar.values, options);
  r.alternates = ar.alternates;
  if (target == Target::Five) r.s = c.s;
  return r;
}

LinearizationResult complete(const JetContext& ctx, const DeterminingSystem& sys,
                             const Bindings& values, const LinearizeOptions& options) {
  if (!parse_target(sys.branch)) throw Error("unknown branch '" + sys.branch + "'");
  DeterminingSystem rest = sys;
  for (const auto& [k, v] : values) rest.fixed[k] = v;
  Placeholders ph = sys.placeholders();
  ZeroTestOptions zero = verify_options(ctx, options.zero);
  for (const auto& eq : sys.equations) {
    if (!values.count(eq.solves)) continue;
    Expr r = simplify(substitute_unknowns(eq.expr, ph, rest.fixed));
    bool closed = true;
    for (const auto& name : free_symbols(r)) {
      if (ph.decode(name)) closed = false;
    }
    if (closed && !r.is_literal_zero() && is_zero(r, zero) != ZeroResult::Zero) {
      throw Error("the value of " + eq.solves + " does not satisfy the " + eq.origin);
    }
  }
  AnsatzResult solved = solve_ansatz(rest, options.ansatz);
  if (!solved.solved) throw AnsatzFailed(solved.residual, solved.failed_unknown);
  Bindings all = values;
  for (const auto& [k, v] : solved.values) all[k] = v;
  if (!satisfies(sys, all, zero)) {
    throw Error("values do not satisfy the determining system");
  }
  return finish(ctx, sys, all, options);
}

std::string describe(const GCoefficient& g) {
  return g.imaginary ? "i*(" + to_infix(g.value) + ")" : to_infix(g.value);
}

std::string describe(const LinearizationResult& r) {
  std::string status = to_string(r.verification.status);
  for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  std::string out = "xbar = " + to_infix(r.transformation.phi) +
                    ", ubar = " + to_infix(r.transformation.psi) + "; ";
  if (r.target == Target::Yumaguzhin && r.g) {
    out += "gbar = " + describe(*r.g) + ", sign " + (r.sign < 0 ? "-" : "+");
  } else if (r.explicit_target) {
    out += "ubar''' = " + to_infix(r.fbar);
  } else {
    out += "ubar''' pulled back = " + to_infix(r.fbar);
  }
  return out + "; " + status;
}

}  // namespace trilin
