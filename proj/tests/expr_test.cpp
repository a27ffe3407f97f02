#include <gtest/gtest.h>

#include <cmath>

#include "support/random_expr.hpp"
#include "trilin/errors.hpp"
#include "trilin/eval.hpp"
#include "trilin/expr.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"
#include "trilin/zero_test.hpp"

namespace trilin {
namespace {

const Expr x = Expr::symbol("x");
const Expr u = Expr::symbol("u");
const Expr p = Expr::symbol("p");
const Expr q = Expr::symbol("q");

TEST(Expr, SumsAndProductsCancel) {
  EXPECT_TRUE(normalize(u * p - p * u).is_literal_zero());
  EXPECT_TRUE(normalize(x - x).is_literal_zero());
  EXPECT_EQ(u * p, p * u);
  EXPECT_EQ(x + u, u + x);
}

TEST(Expr, ConstantsFold) {
  EXPECT_EQ(Expr(2) + Expr(3), Expr(5));
  EXPECT_EQ(Expr(6) / Expr(4), Expr(Rational(3, 2)));
  EXPECT_EQ(pow(Expr(2), 10), Expr(1024));
}

TEST(Expr, LikeBasesMerge) {
  EXPECT_EQ(u * u * pow(u, -3), pow(u, -1));
  EXPECT_EQ(x * x, pow(x, 2));
}

TEST(Expr, BinomialExpansionCancels) {
  Expr lhs = pow(p * p + u * q, 2);
  Expr rhs = pow(p, 4) + 2 * u * p * p * q + u * u * q * q;
  EXPECT_TRUE(normalize(lhs - rhs).is_literal_zero());
}

TEST(Expr, CubeRootOfProduct) {
  Expr e = cbrt(pow(u, 3) * pow(p, 3)) * cbrt(Expr(1));
  EXPECT_EQ(assume_positive(e), u * p);
  EXPECT_EQ(cbrt(Expr(-8)), Expr(-2));
  EXPECT_EQ(pow(cbrt(x), 3), x);
}

TEST(Expr, NumericRadicalsReduce) {
  EXPECT_EQ(cbrt(Expr(16)), 2 * cbrt(Expr(2)));
  EXPECT_EQ(sqrt(Expr(12)), 2 * sqrt(Expr(3)));
  EXPECT_EQ(cbrt(Expr(4)) * cbrt(Expr(2)), Expr(2));
}

TEST(Expr, NormalizeIsIdempotent) {
  testing::ExprGen gen(7);
  for (int i = 0; i < 200; ++i) {
    Expr e = gen.rational(4);
    Expr once = normalize(e);
    EXPECT_EQ(normalize(once), once) << to_infix(e);
  }
}

TEST(Expr, FreeSymbols) {
  Expr e = parse("x*u + sin(q)");
  EXPECT_EQ(free_symbols(e), (std::set<std::string>{"q", "u", "x"}));
  EXPECT_TRUE(depends_on(e, "q"));
  EXPECT_FALSE(depends_on(e, "p"));
  EXPECT_TRUE(contains_function(e));
}

TEST(Diff, PowerRule) {
  Expr f = parse("3*q^2/p - x*u^3*p^4");
  Expr fq = diff(f, "q");
  EXPECT_EQ(fq, normalize(6 * q / p));
  EXPECT_EQ(diff(fq, "q"), normalize(6 / p));
  EXPECT_TRUE(diff(diff(fq, "q"), "q").is_literal_zero());
}

TEST(Diff, CubeRoot) {
  Expr d = diff(cbrt(x), "x");
  EXPECT_EQ(simplify(d - Rational(1, 3) * cbrt(x) / x), Expr(0));
}

TEST(Diff, ChainRuleThroughFunctions) {
  EXPECT_EQ(diff(sin(x * u), "x"), normalize(u * cos(x * u)));
  EXPECT_EQ(diff(exp(2 * x), "x"), normalize(2 * exp(2 * x)));
  EXPECT_EQ(diff(ln(x), "x"), pow(x, -1));
}

TEST(Diff, PlaceholdersFollowDeclaredArguments) {
  Placeholders ph;
  ph.declare("H", {"x", "u"});
  Expr H = Expr::symbol("H");
  EXPECT_EQ(diff(H * H, "u", &ph), normalize(2 * H * Expr::symbol("H_u")));
  EXPECT_TRUE(diff(H, "p", &ph).is_literal_zero());
  EXPECT_EQ(ph.encode("H", {1, 1}), "H_xu");
  auto decoded = ph.decode("H_uu");
  ASSERT_TRUE(decoded.has_value());
  EXPECT_EQ(decoded->orders, (std::vector<int>{0, 2}));
}

TEST(Diff, CommutesWithSubstitution) {
  testing::ExprGen gen(11);
  Bindings sigma{{"u", q + 1}, {"p", u * q}};
  for (int i = 0; i < 40; ++i) {
    Expr e = gen.rational(3);
    Expr a = substitute(diff(e, "x"), sigma);
    Expr b = diff(substitute(e, sigma), "x");
    EXPECT_EQ(is_zero(a - b), ZeroResult::Zero) << to_infix(e);
  }
}

TEST(Substitute, Examples) {
  EXPECT_EQ(substitute(q / p, {{"q", p}}), Expr(1));
  Expr target = parse("xbar^3*ubar", barred_options());
  EXPECT_EQ(substitute(target, {{"xbar", u}, {"ubar", -x}}), normalize(-pow(u, 3) * x));
  Expr H = Expr::symbol("H");
  EXPECT_EQ(substitute(H * H, {{"H", pow(u, -2)}}), pow(u, -4));
}

TEST(Substitute, IsSimultaneous) {
  EXPECT_EQ(substitute(x - u, {{"x", u}, {"u", x}}), normalize(u - x));
}

TEST(Eval, ExactValues) {
  EXPECT_EQ(eval(parse("-3/u^4"), {{"u", Rational(1)}}).q, Rational(-3));
  Value v = eval(parse("p^2 + u*q"), {{"u", Rational(0)}, {"p", Rational(2)}, {"q", Rational(5)}});
  EXPECT_TRUE(v.exact);
  EXPECT_EQ(v.q, Rational(4));
  Value c = eval(cbrt(x), {{"x", Rational(-8)}});
  EXPECT_NEAR(static_cast<double>(c.approx()), -2.0, 1e-12);
}

TEST(Eval, InexactFallsBackToFloat) {
  Value v = eval(cbrt(x), {{"x", Rational(2)}});
  EXPECT_NEAR(static_cast<double>(v.approx()), std::cbrt(2.0), 1e-12);
  EXPECT_NEAR(static_cast<double>(eval_float(sin(x), {{"x", 1.0L}})), std::sin(1.0), 1e-12);
}

TEST(Eval, Errors) {
  EXPECT_THROW(eval(pow(x, -1), {{"x", Rational(0)}}), DivisionByZero);
  EXPECT_THROW(eval(sqrt(x), {{"x", Rational(-1)}}), NegativeEvenRoot);
  EXPECT_THROW(eval(ln(x), {{"x", Rational(-1)}}), DomainError);
  EXPECT_THROW(eval(x + u, {{"x", Rational(1)}}), Error);
}

TEST(ZeroTest, GradedCancellation) {
  Expr grade = parse("864*q^3/p^3 - 1620*q^3/p^3 + 432*q^3/p^3 + 324*q^3/p^3");
  EXPECT_EQ(is_zero(grade), ZeroResult::Zero);
  EXPECT_EQ(is_zero(parse("54*u^3*p^3")), ZeroResult::NonZero);
  EXPECT_EQ(is_zero(Expr(0)), ZeroResult::Zero);
}

TEST(ZeroTest, ExactDecisionsCarryWitnesses) {
  ZeroDecision d = decide_zero(parse("x^2 - 2*x + 1 - (x - 1)^2"));
  EXPECT_EQ(d.result, ZeroResult::Zero);
  EXPECT_TRUE(d.exact);
  ZeroDecision n = decide_zero(parse("sin(x)*u - u*sin(x) + 1/1000000"));
  EXPECT_EQ(n.result, ZeroResult::NonZero);
}

TEST(ZeroTest, TranscendentalIdentitiesAreSampled) {
  ZeroDecision d = decide_zero(parse("sin(x)^2 + cos(x)^2 - 1"));
  EXPECT_EQ(d.result, ZeroResult::Zero);
  EXPECT_FALSE(d.exact);
  EXPECT_GT(d.points_used, 0);
  EXPECT_EQ(is_zero(parse("exp(x)*exp(u) - exp(x + u)")), ZeroResult::Zero);
  EXPECT_EQ(is_zero(parse("sin(x) - x")), ZeroResult::NonZero);
}

TEST(ZeroTest, AgreesWithNormalFormOnRandomExpressions) {
  testing::ExprGen gen(5);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Expr e = gen.rational(3);
    NFZero exact = nf_zero_test(e);
    if (exact == NFZero::Unknown) continue;
    ZeroTestOptions sampled;
    sampled.seed = 99;
    Expr shifted = e - normalize(e) + normalize(e);
    EXPECT_EQ(is_zero(shifted, sampled) == ZeroResult::Zero, exact == NFZero::Zero) << to_infix(e);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ZeroTest, SamplerIsDeterministic) {
  RationalSampler a(42);
  RationalSampler b(42);
  for (int i = 0; i < 20; ++i) {
    Rational r = a.next();
    EXPECT_EQ(r, b.next());
    EXPECT_LE(abs(r), Rational(5));
    EXPECT_LE(r.get_den(), 64);
  }
}

TEST(NormalForm, SimplifyCancelsCommonFactors) {
  EXPECT_EQ(simplify(parse("(x^2 - u^2)/(x - u)")), normalize(x + u));
  EXPECT_EQ(simplify(parse("1/x + 1/u")), simplify(parse("(x + u)/(x*u)")));
  auto [num, den] = numerator_denominator(parse("(x + 1)/(x*u)"));
  EXPECT_EQ(num, normalize(x + 1));
  EXPECT_EQ(den, normalize(x * u));
}

TEST(NormalForm, ExactnessDependsOnAtoms) {
  EXPECT_EQ(nf_zero_test(parse("x*u - u*x")), NFZero::Zero);
  EXPECT_EQ(nf_zero_test(parse("x - u")), NFZero::NonZero);
  EXPECT_EQ(nf_zero_test(parse("sin(x) - u")), NFZero::Unknown);
  EXPECT_EQ(nf_zero_test(parse("sin(x) - sin(x)")), NFZero::Zero);
}

TEST(NormalForm, CubeRootGrades) {
  Expr j = cbrt(2 * x);
  EXPECT_EQ(nf_zero_test(pow(j, 3) - 2 * x), NFZero::Zero);
  EXPECT_EQ(nf_zero_test(j - cbrt(Expr(2)) * cbrt(x)), NFZero::Zero);
  EXPECT_EQ(nf_zero_test(j * j - cbrt(Expr(4)) * cbrt(x) * cbrt(x)), NFZero::Zero);
}

}  // namespace
}  // namespace trilin
