#include <gtest/gtest.h>

#include "support/transforms.hpp"
#include "trilin/linearize.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {
namespace {

const char* kQuartic = "3*q^2/p - x*u^3*p^4";

bool same(const Expr& a, const Expr& b) { return nf_zero_test(simplify(a - b)) == NFZero::Zero; }
bool same(const Expr& a, const std::string& b) { return same(a, parse(b)); }

LinearizationResult run(const std::string& f, Target target = Target::Auto) {
  LinearizeOptions opts;
  opts.target = target;
  return linearize(JetContext(parse(f)), opts);
}

TEST(Linearize, QuarticExampleLaguerreForsyth) {
  LinearizationResult r = run(kQuartic, Target::LaguerreForsyth);
  EXPECT_EQ(r.verdict, Verdict::Four);
  EXPECT_EQ(r.transformation.phi, parse("u"));
  EXPECT_EQ(r.transformation.psi, parse("-x"));
  EXPECT_EQ(r.auxiliaries.at("H"), parse("1/u^2"));
  EXPECT_EQ(r.auxiliaries.at("b"), parse("u"));
  ASSERT_TRUE(r.a.has_value());
  EXPECT_EQ(*r.a, parse("xbar", barred_options()));
  EXPECT_EQ(r.verification.status, VerifyStatus::Verified);
  EXPECT_EQ(describe(r), "xbar = u, ubar = -x; ubar''' = xbar^3*ubar; VERIFIED");
}

TEST(Linearize, QuarticExampleConstantCoefficientForm) {
  LinearizationResult r = run(kQuartic, Target::Yumaguzhin);
  EXPECT_TRUE(same(r.transformation.phi, "3/(4^(1/3)*u^4)"));
  EXPECT_TRUE(same(r.transformation.psi, "-x/u^5"));
  EXPECT_EQ(r.sign, -1);
  ASSERT_TRUE(r.g.has_value());
  EXPECT_FALSE(r.g->imaginary);
  EXPECT_TRUE(same(r.g->value, parse("3^(1/2)/4*xbar^(-3/2)", barred_options())));
  ASSERT_TRUE(r.g_other.has_value());
  EXPECT_TRUE(r.g_other->imaginary);
  EXPECT_TRUE(same(r.g_other->value, parse("3^(1/2)/4*xbar^(-3/2)", barred_options())));
  EXPECT_EQ(r.verification.status, VerifyStatus::Verified);
}

TEST(Linearize, ConstantCoefficientCoefficientIdentity) {
  JetContext ctx(parse(kQuartic));
  LinearizationResult r = run(kQuartic, Target::Yumaguzhin);
  InvariantReport rep = compute_report(ctx, JScaling::Yumaguzhin);
  Expr g_at = substitute(r.g->value, {{"xbar", Expr(r.sign) * rep.K}});
  EXPECT_EQ(is_zero(g_at * rep.DxK - Expr(r.sign) * rep.J), ZeroResult::Zero);
}

TEST(Linearize, QuarticExampleSystemHasTheExpectedReductions) {
  DeterminingSystem sys = determining_system(JetContext(parse(kQuartic)), Target::Yumaguzhin, -1);
  EXPECT_TRUE(sys.fixed.count("phi"));
  EXPECT_TRUE(same(sys.fixed.at("phi"), "3/(4^(1/3)*u^4)"));
}

TEST(Linearize, CubicCoefficientRiccatiRoot) {
  LinearizationResult r = run("x^3*u", Target::LaguerreForsyth);
  EXPECT_EQ(r.auxiliaries.at("H"), parse("1/x^2"));
  EXPECT_EQ(r.verification.status, VerifyStatus::Verified);
}

TEST(Linearize, LaguerreForsythCoefficientMatchesPreimage) {
  for (const char* f : {kQuartic, "x^3*u", "(x + 1)^3*u"}) {
    LinearizationResult r = run(f, Target::LaguerreForsyth);
    ASSERT_EQ(r.verification.status, VerifyStatus::Verified) << f;
    if (!r.a.has_value()) continue;
    Expr lhs = substitute(*r.a, {{"xbar", r.transformation.phi}});
    EXPECT_EQ(is_zero(lhs - r.auxiliaries.at("b")), ZeroResult::Zero) << f;
  }
}

TEST(Linearize, SevenSymmetries) {
  LinearizationResult zero = run("0");
  EXPECT_EQ(zero.verdict, Verdict::Seven);
  EXPECT_EQ(zero.transformation.phi, parse("x"));
  EXPECT_EQ(zero.transformation.psi, parse("u"));
  EXPECT_TRUE(zero.fbar.is_literal_zero());
  LinearizationResult swapped = run("3*q^2/p");
  EXPECT_EQ(swapped.verdict, Verdict::Seven);
  EXPECT_EQ(swapped.verification.status, VerifyStatus::Verified);
}

TEST(Linearize, FiveSymmetries) {
  LinearizationResult r = run("u");
  EXPECT_EQ(r.verdict, Verdict::Five);
  EXPECT_EQ(r.transformation.phi, parse("x"));
  EXPECT_EQ(r.transformation.psi, parse("u"));
  EXPECT_TRUE(r.s.is_literal_zero());
  JetContext ctx(Expr::symbol("u"));
  Expr f = unbar(pushforward(ctx, {parse("x"), parse("u*x")}));
  LinearizationResult back = linearize(JetContext(f));
  EXPECT_EQ(back.verdict, Verdict::Five);
  EXPECT_TRUE(back.s.is_literal_zero());
  EXPECT_EQ(back.verification.status, VerifyStatus::Verified);
}

TEST(Linearize, InhomogeneousImageIsShiftedByAParticularSolution) {
  LinearizationResult r = run("u - x");
  EXPECT_EQ(r.verification.status, VerifyStatus::Verified);
  EXPECT_EQ(describe(r), "xbar = x, ubar = -x + u; ubar''' = ubar; VERIFIED");
}

TEST(Linearize, BranchMismatch) {
  EXPECT_THROW(run("0", Target::LaguerreForsyth), WrongBranch);
  EXPECT_THROW(run("u", Target::Seven), WrongBranch);
  EXPECT_THROW(run(kQuartic, Target::Five), WrongBranch);
  EXPECT_THROW(run("u", Target::LaguerreForsyth), WrongBranch);
}

TEST(Linearize, NotLinearizable) {
  try {
    run("q^3");
    FAIL();
  } catch (const NotLinearizable& e) {
    EXPECT_EQ(e.classification.verdict, Verdict::NotLinearizable);
  }
}

TEST(Linearize, RoundTripsThroughRandomMaps) {
  std::mt19937_64 rng(41);
  std::vector<Expr> seeds = {Expr(0), parse("u"), parse("x^3*u")};
  int verified = 0;
  for (int i = 0; i < 6; ++i) {
    const Expr& seed = seeds[static_cast<std::size_t>(i) % seeds.size()];
    PointTransformation t = testing::random_transformation(rng);
    Expr f = unbar(pushforward(JetContext(seed), t));
    JetContext ctx(f);
    Verdict expected = classify(JetContext(seed)).verdict;
    EXPECT_EQ(classify(ctx).verdict, expected) << to_infix(f);
    try {
      LinearizationResult r = linearize(ctx);
      EXPECT_EQ(r.verification.status, VerifyStatus::Verified) << to_infix(f);
      ++verified;
    } catch (const AnsatzFailed& e) {
      PointTransformation back = invert(t);
      Bindings known = testing::known_solution(ctx, e.residual, back);
      LinearizationResult r = complete(ctx, e.residual, known);
      EXPECT_EQ(r.verification.status, VerifyStatus::Verified) << to_infix(f);
    }
  }
  EXPECT_GT(verified, 0);
}

TEST(Complete, AcceptsUserSuppliedValues) {
  JetContext ctx(parse(kQuartic));
  DeterminingSystem sys = determining_system(ctx, Target::LaguerreForsyth);
  Bindings values{{"H", parse("1/u^2")}, {"b", parse("u")}, {"a1", parse("1/p")},
                  {"phi", parse("u")},   {"psi", parse("-x")}};
  LinearizationResult r = complete(ctx, sys, values);
  EXPECT_EQ(r.verification.status, VerifyStatus::Verified);
  values["psi"] = parse("x");
  EXPECT_THROW(complete(ctx, sys, values), Error);
}

TEST(Targets, ParseNames) {
  EXPECT_EQ(parse_target("laguerre"), Target::LaguerreForsyth);
  EXPECT_EQ(parse_target("yumaguzhin"), Target::Yumaguzhin);
  EXPECT_FALSE(parse_target("nonsense").has_value());
}

}  // namespace
}  // namespace trilin
