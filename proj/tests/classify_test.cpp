#include <gtest/gtest.h>

#include <algorithm>

#include "trilin/classify.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {
namespace {

Verdict verdict_of(const std::string& f) { return classify(JetContext(parse_ode(f))).verdict; }

bool same(const Expr& a, const Expr& b) { return nf_zero_test(simplify(a - b)) == NFZero::Zero; }

TEST(Classify, CanonicalForms) {
  EXPECT_EQ(verdict_of("0"), Verdict::Seven);
  EXPECT_EQ(verdict_of("3*q^2/p - x*u^3*p^4"), Verdict::Four);
  EXPECT_EQ(verdict_of("x^3*u"), Verdict::Four);
  SymmetryClass five = classify(JetContext(parse("u")));
  EXPECT_EQ(five.verdict, Verdict::Five);
  EXPECT_TRUE(five.s.is_literal_zero());
  SymmetryClass shifted = classify(JetContext(parse("2*p + u")));
  EXPECT_EQ(shifted.verdict, Verdict::Five);
}

TEST(Classify, NonLinearizableEquations) {
  SymmetryClass c = classify(JetContext(parse("q^3")));
  EXPECT_EQ(c.verdict, Verdict::NotLinearizable);
  EXPECT_NE(std::find(c.failing.begin(), c.failing.end(), "I1"), c.failing.end());
  EXPECT_EQ(verdict_of("u^2"), Verdict::NotLinearizable);
  EXPECT_EQ(verdict_of("exp(p)"), Verdict::NotLinearizable);
}

TEST(Classify, SevenSymmetriesSurviveTheSwapOfVariables) {
  EXPECT_EQ(verdict_of("3*q^2/p"), Verdict::Seven);
}

TEST(Classify, Descriptions) {
  EXPECT_EQ(describe(classify(JetContext(parse("3*q^2/p - x*u^3*p^4")))),
            "four point symmetries; K = -3/u^4");
  EXPECT_EQ(describe(classify(JetContext(Expr(0)))), "seven point symmetries");
  EXPECT_EQ(describe(classify(JetContext(parse("u")))), "five point symmetries; s = 0");
  EXPECT_EQ(describe(classify(JetContext(parse("q^3")))),
            "not linearizable by a point transformation; failing: I1 I2");
}

TEST(Classify, ReportInEitherScaling) {
  JetContext ctx(parse("x^3*u"));
  for (JScaling s : {JScaling::LaguerreForsyth, JScaling::Yumaguzhin}) {
    EXPECT_EQ(classify_report(compute_report(ctx, s)).verdict, Verdict::Four);
  }
}

TEST(Classify, CubicCoefficientTable) {
  const Expr x = Expr::symbol("x");
  struct Row {
    const char* a;
    Verdict expected;
  };
  for (const Row& row : {Row{"0", Verdict::Seven}, Row{"1", Verdict::Five}, Row{"3", Verdict::Five},
                         Row{"x", Verdict::Four}, Row{"x^2 + 1", Verdict::Four},
                         Row{"2*x - 1", Verdict::Four}}) {
    Expr f = simplify(pow(parse(row.a), 3) * Expr::symbol("u"));
    EXPECT_EQ(classify(JetContext(f)).verdict, row.expected) << row.a;
  }
}

TEST(ClassifyLinear, ConstantCoefficientsWithoutParameters) {
  LinearClassification zero = classify_linear(Expr(0), Expr(0), Expr(0), Expr(0), {});
  ASSERT_TRUE(zero.verdict.has_value());
  EXPECT_EQ(zero.verdict->verdict, Verdict::Seven);
  LinearClassification cubic = classify_linear(Expr(0), Expr(0), parse("x^3"), Expr(0), {});
  ASSERT_TRUE(cubic.verdict.has_value());
  EXPECT_EQ(cubic.verdict->verdict, Verdict::Four);
  for (const char* c2 : {"1", "-2", "5"}) {
    LinearClassification c = classify_linear(Expr(1), parse(c2), Expr(3), Expr(1), {});
    ASSERT_TRUE(c.verdict.has_value());
    EXPECT_NE(c.verdict->verdict, Verdict::Four);
  }
}

TEST(ClassifyLinear, SteamTurbineThreshold) {
  std::vector<std::string> params = {"m", "f", "k", "h", "alpha", "I"};
  auto P = [&](const std::string& s) { return parse(s, params); };
  LinearClassification lc =
      classify_linear(P("-f/m"), P("-k/m"), P("-h*alpha/(I*m)"), Expr(0), params);
  ASSERT_TRUE(lc.conditions.has_value());
  EXPECT_TRUE(lc.conditions->dxk_identically_zero);
  bool found = false;
  for (const auto& [name, value] : lc.conditions->thresholds) {
    if (name == "alpha") found = same(value, P("f*I*(9*k*m - 2*f^2)/(27*m^2*h)"));
  }
  EXPECT_TRUE(found);
  Expr seven = linear_rhs(Expr(-1), Expr(-1), Expr(Rational(-7, 27)), Expr(0));
  EXPECT_EQ(classify(JetContext(seven)).verdict, Verdict::Seven);
}

TEST(Beam, RigidityConstraint) {
  BeamCheck varying = beam_constraint_check(parse("-pa3*x^2/(x^2 - 1)", {"pa3"}));
  EXPECT_EQ(varying.constraint, BeamConstraint::Satisfied);
  EXPECT_EQ(varying.classification.verdict, Verdict::Five);
  BeamCheck constant = beam_constraint_check(parse("7"));
  EXPECT_EQ(constant.classification.verdict, Verdict::Seven);
  BeamCheck linear = beam_constraint_check(parse("x"));
  EXPECT_EQ(linear.constraint, BeamConstraint::Violated);
  EXPECT_EQ(linear.classification.verdict, Verdict::Four);
}

TEST(Beam, RightHandSide) {
  Expr rhs = beam_rhs(parse("x"), Expr(2));
  EXPECT_TRUE(same(rhs, parse("-(1 + 2/x)*p + 2/x^2*u")));
}

}  // namespace
}  // namespace trilin
