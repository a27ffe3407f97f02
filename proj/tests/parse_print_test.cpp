#include <gtest/gtest.h>

#include "support/random_expr.hpp"
#include "trilin/errors.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"

namespace trilin {
namespace {

const Expr x = Expr::symbol("x");
const Expr u = Expr::symbol("u");
const Expr p = Expr::symbol("p");
const Expr q = Expr::symbol("q");

TEST(Parse, RightHandSides) {
  EXPECT_EQ(parse("3*q^2/p - x*u^3*p^4"), normalize(3 * q * q / p - x * pow(u, 3) * pow(p, 4)));
  EXPECT_EQ(parse("0"), Expr(0));
  Expr linear = parse("c1*q + c2*p + c3*u", {"c1", "c2", "c3"});
  EXPECT_EQ(linear, normalize(Expr::symbol("c1") * q + Expr::symbol("c2") * p + Expr::symbol("c3") * u));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse("2*q^2^3"), normalize(2 * pow(q, 8)));
  EXPECT_EQ(parse("-x^2"), normalize(-pow(x, 2)));
  EXPECT_EQ(parse("1 - x - u"), normalize(1 - x - u));
  EXPECT_EQ(parse("x/u/p"), normalize(x / (u * p)));
  EXPECT_EQ(parse("x^-1"), pow(x, -1));
}

TEST(Parse, RationalLiteralsAndExponents) {
  EXPECT_EQ(parse("3/2"), Expr(Rational(3, 2)));
  EXPECT_EQ(parse("2.25"), Expr(Rational(9, 4)));
  EXPECT_EQ(parse("x^(1/3)"), cbrt(x));
  EXPECT_THROW(parse("x^u"), Error);
}

TEST(Parse, DerivativeAliases) {
  EXPECT_EQ(parse("u''*u'"), normalize(q * p));
  EXPECT_EQ(parse_ode("u''' = 3*u''^2/u' - x*u^3*u'^4"), parse("3*q^2/p - x*u^3*p^4"));
  EXPECT_EQ(parse_ode("u"), u);
  EXPECT_EQ(parse("ubar'' + xbar", barred_options()), normalize(Expr::symbol("qbar") + Expr::symbol("xbar")));
}

TEST(Parse, Functions) {
  EXPECT_EQ(parse("sin(x) + exp(u) + ln(p) + cos(q)"), normalize(sin(x) + exp(u) + ln(p) + cos(q)));
  EXPECT_EQ(parse("sqrt(x)"), sqrt(x));
  EXPECT_EQ(parse("cbrt(2)"), cbrt(Expr(2)));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("x +"), SyntaxError);
  EXPECT_THROW(parse("y*x"), UnknownIdentifier);
  EXPECT_THROW(parse("foo(x)"), Error);
  try {
    parse("sin(q");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1U);
    EXPECT_EQ(e.column(), 6U);
  }
  EXPECT_THROW(parse_ode("u'' = q"), SyntaxError);
}

TEST(Print, Infix) {
  EXPECT_EQ(to_infix(parse("-3/u^4")), "-3/u^4");
  EXPECT_EQ(to_infix(parse("u*p")), "u*p");
  EXPECT_EQ(to_infix(Expr(Rational(-7, 2))), "-7/2");
  EXPECT_EQ(to_infix(parse("x^3*u")), "x^3*u");
}

TEST(Print, Latex) {
  EXPECT_EQ(to_latex(cbrt(Expr(2))), "\\sqrt[3]{2}");
  EXPECT_EQ(to_latex(sqrt(Expr(3))), "\\sqrt{3}");
  EXPECT_EQ(print(parse("-3/u^4"), Format::Latex), "-\\frac{3}{{u}^{4}}");
}

TEST(Print, JsonRoundTrip) {
  Expr e = parse("3*q^2/p - x*u^3*p^4 + sin(x)/7");
  std::string json = to_json(e);
  EXPECT_NE(json.find("\"kind\""), std::string::npos);
  EXPECT_EQ(from_json(json), e);
  EXPECT_NE(to_json(Expr(Rational(1, 3))).find("\"1/3\""), std::string::npos);
}

TEST(Print, InfixRoundTripOnRandomTrees) {
  testing::ExprGen gen(17);
  for (int i = 0; i < 300; ++i) {
    Expr e = normalize(i % 2 ? gen.rational(4) : gen.smooth(3));
    EXPECT_EQ(parse(to_infix(e)), e) << to_infix(e);
    EXPECT_EQ(from_json(to_json(e)), e) << to_infix(e);
  }
}

TEST(Print, Deterministic) {
  Expr a = parse("u + x + q*p");
  Expr b = parse("p*q + x + u");
  EXPECT_EQ(to_infix(a), to_infix(b));
}

}  // namespace
}  // namespace trilin
