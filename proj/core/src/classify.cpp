#include "trilin/classify.hpp"

#include "trilin/errors.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Seven:
      return "Seven";
    case Verdict::Five:
      return "Five";
    case Verdict::Four:
      return "Four";
    case Verdict::NotLinearizable:
      return "NotLinearizable";
    case Verdict::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

std::string to_string(BeamConstraint b) {
  switch (b) {
    case BeamConstraint::Satisfied:
      return "Satisfied";
    case BeamConstraint::Violated:
      return "Violated";
    case BeamConstraint::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

namespace {

enum class Check { Pass, Fail, Open };

class Tree {
 public:
  explicit Tree(const InvariantReport& r) : r_(r) {}

  // Every name must test Zero (want_zero) or NonZero.
  Check require(const std::vector<std::string>& names, bool want_zero,
                std::vector<std::string>& failing, std::vector<std::string>& undecided) const {
    Check out = Check::Pass;
    for (const auto& n : names) {
      ZeroResult z = r_.zero_flags.at(n);
      if (z == ZeroResult::Unknown) {
        undecided.push_back(n);
        if (out == Check::Pass) out = Check::Open;
      } else if ((z == ZeroResult::Zero) != want_zero) {
        failing.push_back(n);
        out = Check::Fail;
      }
    }
    return out;
  }

  Expr field(const std::string& name) const {
    for (const auto& [n, e] : r_.fields()) {
      if (n == name) return e;
    }
    return Expr();
  }

 private:
  const InvariantReport& r_;
};

SymmetryClass finish(SymmetryClass c, Verdict v, const Tree& tree) {
  c.verdict = v;
  if (v == Verdict::Indeterminate) {
    for (const auto& n : c.undecided) c.residual_conditions.push_back(tree.field(n));
  }
  return c;
}

}  // namespace

SymmetryClass classify_report(const InvariantReport& report) {
  SymmetryClass c;
  c.report = report;
  Tree tree(report);
  std::vector<std::string> failing;
  std::vector<std::string> undecided;

  Check a = tree.require({"I1", "I2"}, true, failing, undecided);
  if (a == Check::Fail) {
    c.failing = failing;
    return finish(c, Verdict::NotLinearizable, tree);
  }
  ZeroResult w = report.zero_flags.at("W");
  if (w == ZeroResult::Unknown) undecided.push_back("W");
  if (a == Check::Open || w == ZeroResult::Unknown) {
    c.undecided = undecided;
    return finish(c, Verdict::Indeterminate, tree);
  }

  if (w == ZeroResult::Zero) {
    Check b = tree.require({"I7"}, true, failing, undecided);
    c.failing = failing;
    c.undecided = undecided;
    if (b == Check::Pass) return finish(c, Verdict::Seven, tree);
    return finish(c, b == Check::Fail ? Verdict::NotLinearizable : Verdict::Indeterminate, tree);
  }

  c.K = report.K;
  c.DxK = report.DxK;
  Check base = tree.require({"I4", "I5", "I6", "I7"}, true, failing, undecided);
  if (base != Check::Pass) {
    c.failing = failing;
    c.undecided = undecided;
    return finish(c, base == Check::Fail ? Verdict::NotLinearizable : Verdict::Indeterminate,
                  tree);
  }

  std::vector<std::string> k_fail;
  std::vector<std::string> k_open;
  Check constant = tree.require({"I9", "I10", "Ku", "I12"}, true, k_fail, k_open);
  if (constant == Check::Pass) {
    c.s = simplify(report.K);
    return finish(c, Verdict::Five, tree);
  }
  if (constant == Check::Open) {
    c.undecided = k_open;
    return finish(c, Verdict::Indeterminate, tree);
  }

  Check four_zero = tree.require({"I9", "I10", "I11"}, true, failing, undecided);
  Check four_nonzero = tree.require({"I8", "DxK"}, false, failing, undecided);
  c.failing = failing;
  c.undecided = undecided;
  if (four_zero == Check::Fail || four_nonzero == Check::Fail) {
    return finish(c, Verdict::NotLinearizable, tree);
  }
  if (four_zero == Check::Open || four_nonzero == Check::Open) {
    return finish(c, Verdict::Indeterminate, tree);
  }
  return finish(c, Verdict::Four, tree);
}

SymmetryClass classify(const JetContext& ctx, const ZeroTestOptions& options) {
  return classify_report(compute_report(ctx, JScaling::LaguerreForsyth, options));
}

std::string describe(const SymmetryClass& c) {
  switch (c.verdict) {
    case Verdict::Seven:
      return "seven point symmetries";
    case Verdict::Five:
      return "five point symmetries; s = " + to_infix(c.s);
    case Verdict::Four:
      return "four point symmetries; K = " + to_infix(c.K);
    case Verdict::NotLinearizable: {
      std::string out = "not linearizable by a point transformation; failing:";
      for (const auto& n : c.failing) out += " " + n;
      return out;
    }
    case Verdict::Indeterminate: {
      std::string out = "indeterminate; undecided:";
      for (const auto& n : c.undecided) out += " " + n;
      return out;
    }
  }
  return {};
}

Expr linear_rhs(const Expr& c1, const Expr& c2, const Expr& c3, const Expr& c4) {
  return normalize(c1 * Expr::symbol("q") + c2 * Expr::symbol("p") + c3 * Expr::symbol("u") + c4);
}

LinearClassification classify_linear(const Expr& c1, const Expr& c2, const Expr& c3,
                                     const Expr& c4, const std::vector<std::string>& params,
                                     const ZeroTestOptions& options) {
  JetContext ctx(linear_rhs(c1, c2, c3, c4), params);
  LinearClassification out;
  bool symbolic = false;
  for (const auto& s : free_symbols(ctx.f)) {
    if (s != "x" && s != "u" && s != "p" && s != "q") symbolic = true;
  }
  if (!symbolic) {
    out.verdict = classify(ctx, options);
    return out;
  }
  ConditionReport r;
  r.W = compute_W(ctx);
  r.W_numerator = r.W;
  try {
    auto [num, den] = numerator_denominator(r.W);
    r.W_numerator = num;
  } catch (const Error&) {
  }
  if (!r.W.is_literal_zero()) {
    Expr J = compute_J(r.W, JScaling::LaguerreForsyth);
    Expr K = simplify(compute_I8(ctx, J) / pow(J, 4));
    r.DxK = simplify(total_derivative(ctx, K));
  }
  r.dxk_identically_zero = is_zero(r.DxK, options) == ZeroResult::Zero;
  for (const auto& p : params) {
    if (!depends_on(r.W_numerator, p)) continue;
    Expr d = diff(r.W_numerator, p);
    if (depends_on(d, p)) continue;
    if (auto v = solve_for(r.W_numerator, p)) r.thresholds.emplace_back(p, *v);
  }
  out.conditions = r;
  return out;
}

Expr beam_constraint(const Expr& B0, const Expr& pa3) {
  std::vector<Expr> b{B0};
  for (int i = 1; i <= 4; ++i) b.push_back(diff(b.back(), "x"));
  const Expr& B = b[0];
  const Expr& B1 = b[1];
  const Expr& B2 = b[2];
  const Expr& B3 = b[3];
  const Expr& B4 = b[4];
  return simplify(18 * pow(B, 3) * pow(B1, 2) * B2 - 36 * pow(B, 2) * pow(B1, 4) +
                  18 * pa3 * pow(B, 2) * pow(B1, 2) * B2 - 9 * pa3 * B * pow(B1, 4) +
                  24 * B * pow(B1, 4) * B2 - 12 * pow(B, 2) * pow(B1, 2) * pow(B2, 2) -
                  72 * pow(B, 3) * B1 * B2 * B3 + 18 * pow(B, 3) * pow(B1, 2) * B4 -
                  16 * pow(B1, 6) + 56 * pow(B, 3) * pow(B2, 3));
}

Expr beam_rhs(const Expr& B, const Expr& pa3) {
  return simplify(-(1 + pa3 / B) * Expr::symbol("p") +
                  pa3 * diff(B, "x") / pow(B, 2) * Expr::symbol("u"));
}

BeamCheck beam_constraint_check(const Expr& B, const std::string& pa3,
                                const ZeroTestOptions& options) {
  BeamCheck out;
  Expr a = Expr::symbol(pa3);
  out.constraint_value = beam_constraint(B, a);
  switch (is_zero(out.constraint_value, options)) {
    case ZeroResult::Zero:
      out.constraint = BeamConstraint::Satisfied;
      break;
    case ZeroResult::NonZero:
      out.constraint = BeamConstraint::Violated;
      break;
    case ZeroResult::Unknown:
      out.constraint = BeamConstraint::Unknown;
      break;
  }
  out.rhs = beam_rhs(B, a);
  out.classification = classify(JetContext(out.rhs, {pa3}), options);
  return out;
}

}  // namespace trilin
