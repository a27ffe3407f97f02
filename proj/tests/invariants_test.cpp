#include <gtest/gtest.h>

#include <random>

#include "trilin/invariants.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {
namespace {

const char* kQuartic = "3*q^2/p - x*u^3*p^4";

bool same(const Expr& a, const std::string& b) {
  return nf_zero_test(simplify(a - parse(b))) == NFZero::Zero;
}

TEST(Invariants, WeightOfTheQuarticExample) {
  JetContext ctx(parse(kQuartic));
  EXPECT_EQ(simplify(compute_W(ctx)), parse("54*u^3*p^3"));
  EXPECT_TRUE(compute_W(JetContext(Expr(0))).is_literal_zero());
  EXPECT_EQ(simplify(compute_W(JetContext(parse("x^3*u")))), parse("54*x^3"));
}

TEST(Invariants, ScalingsOfJ) {
  EXPECT_EQ(compute_J(parse("54*u^3*p^3"), JScaling::LaguerreForsyth), parse("u*p"));
  EXPECT_TRUE(same(compute_J(parse("54*u^3*p^3"), JScaling::Yumaguzhin), "-2^(1/3)*u*p"));
  EXPECT_EQ(scaling_factor(JScaling::LaguerreForsyth), Rational(1, 54));
  EXPECT_EQ(scaling_factor(JScaling::Yumaguzhin), Rational(-1, 27));
}

TEST(Invariants, QuarticExampleLaguerreForsythReport) {
  InvariantReport r = compute_report(JetContext(parse(kQuartic)));
  ASSERT_TRUE(r.j_applicable);
  EXPECT_EQ(r.J, parse("u*p"));
  EXPECT_TRUE(same(r.K, "-3/u^4"));
  EXPECT_TRUE(same(r.I8, "-3*p^4"));
  for (const char* zero : {"I1", "I2", "I4", "I5", "I6", "I7", "I9", "I10", "I11", "I12"}) {
    EXPECT_EQ(r.zero_flags.at(zero), ZeroResult::Zero) << zero;
  }
  EXPECT_EQ(r.zero_flags.at("DxK"), ZeroResult::NonZero);
}

TEST(Invariants, QuarticExampleYumaguzhinReport) {
  InvariantReport r = compute_report(JetContext(parse(kQuartic)), JScaling::Yumaguzhin);
  EXPECT_TRUE(same(r.J, "-2^(1/3)*u*p"));
  EXPECT_TRUE(same(r.I8, "-3*4^(1/3)*p^4"));
  EXPECT_TRUE(same(r.K, "-3/(4^(1/3)*u^4)"));
}

TEST(Invariants, CubicCoefficientReport) {
  InvariantReport r = compute_report(JetContext(parse("x^3*u")));
  EXPECT_EQ(r.J, parse("x"));
  EXPECT_EQ(r.I8, Expr(-3));
  EXPECT_TRUE(same(r.K, "-3/x^4"));
  EXPECT_TRUE(same(r.DxK, "12/x^5"));
}

TEST(Invariants, KTimesJToTheFourthIsI8) {
  for (const char* f : {kQuartic, "x^3*u", "u", "x*q + u", "(x^2 + 1)^3*u"}) {
    for (JScaling s : {JScaling::LaguerreForsyth, JScaling::Yumaguzhin}) {
      InvariantReport r = compute_report(JetContext(parse(f)), s);
      if (!r.j_applicable) continue;
      EXPECT_EQ(nf_zero_test(simplify(r.K * pow(r.J, 4) - r.I8)), NFZero::Zero) << f;
    }
  }
}

TEST(Invariants, ZeroFlagsAgreeAcrossScalings) {
  for (const char* f : {kQuartic, "x^3*u", "q^2/p + u", "exp(x)*u"}) {
    InvariantReport a = compute_report(JetContext(parse(f)), JScaling::LaguerreForsyth);
    InvariantReport b = compute_report(JetContext(parse(f)), JScaling::Yumaguzhin);
    for (const char* name : {"I1", "I2", "I4", "I5", "I6", "I7"}) {
      if (!a.zero_flags.count(name)) continue;
      EXPECT_EQ(a.zero_flags.at(name), b.zero_flags.at(name)) << f << " " << name;
    }
  }
}

TEST(Invariants, LinearEquationsHaveVanishingInvariants) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> coef(-3, 3);
  const Expr x = Expr::symbol("x");
  auto random_poly = [&] {
    Expr out = Expr(0);
    for (int k = 0; k <= 2; ++k) out = out + Expr(coef(rng)) * pow(x, k);
    return normalize(out);
  };
  for (int i = 0; i < 6; ++i) {
    Expr f = normalize(random_poly() * Expr::symbol("q") + random_poly() * Expr::symbol("p") +
                       (random_poly() + 5) * Expr::symbol("u") + random_poly());
    InvariantReport r = compute_report(JetContext(f));
    for (const char* name : {"I1", "I2", "I4", "I5", "I6", "I7", "I9", "I10", "I11"}) {
      if (!r.zero_flags.count(name)) continue;
      EXPECT_EQ(r.zero_flags.at(name), ZeroResult::Zero) << to_infix(f) << " " << name;
    }
  }
}

TEST(Invariants, FieldsSkipInapplicableEntries) {
  InvariantReport seven = compute_report(JetContext(Expr(0)));
  EXPECT_FALSE(seven.j_applicable);
  std::vector<std::string> names;
  for (const auto& [name, value] : seven.fields()) names.push_back(name);
  EXPECT_EQ(names, (std::vector<std::string>{"W", "I1", "I2", "I7"}));
  InvariantReport four = compute_report(JetContext(parse(kQuartic)));
  EXPECT_EQ(four.fields().size(), 16U);
}

TEST(KConsistency, CubicCoefficients) {
  for (const char* a : {"x", "1", "x^2", "x^3 + 2", "2*x - 1"}) {
    Expr ae = parse(a);
    InvariantReport r = compute_report(JetContext(simplify(pow(ae, 3) * Expr::symbol("u"))));
    EXPECT_EQ(check_K_consistency(r, ae), Consistency::Consistent) << a;
  }
  InvariantReport r = compute_report(JetContext(parse("x^6*u")));
  EXPECT_TRUE(same(r.K, "-8/x^6"));
  EXPECT_EQ(check_K_consistency(r, parse("x")), Consistency::Inconsistent);
}

}  // namespace
}  // namespace trilin
