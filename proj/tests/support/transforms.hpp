#pragma once

#include <random>
#include <string>

#include "trilin/ansatz.hpp"
#include "trilin/jet.hpp"
#include "trilin/parse.hpp"
#include "trilin/print.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin::testing {

// Elementary invertible maps with small integer coefficients.
inline PointTransformation elementary(std::mt19937_64& rng) {
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  long c = pick(1, 3) * (pick(0, 1) ? 1 : -1);
  long k = pick(1, 2);
  const Expr x = Expr::symbol("x");
  const Expr u = Expr::symbol("u");
  switch (pick(0, 4)) {
    case 0:
      return {Expr(pick(1, 3)) * x, Expr(c) * u};
    case 1:
      return {x + Expr(c) * pow(u, k), u};
    case 2:
      return {x, u + Expr(c) * pow(x, k)};
    case 3:
      return {u, x};
    default:
      return {x, u * (x + Expr(pick(1, 3)))};
  }
}

// Composition of one or two elementary maps.
inline PointTransformation random_transformation(std::mt19937_64& rng) {
  PointTransformation t = elementary(rng);
  if (std::uniform_int_distribution<int>(0, 1)(rng)) t = compose(elementary(rng), t);
  return t;
}

// Values of the auxiliary unknowns induced by a known linearizing map
// (phi, psi) of u''' = f onto the canonical form of its branch. They
// override any fixed values of the system.
inline Bindings known_solution(const JetContext& ctx, const DeterminingSystem& sys,
                               const PointTransformation& t) {
  Expr dphi = simplify(total_derivative(ctx, t.phi));
  Expr jac = simplify(t.jacobian);
  Bindings out{{"phi", t.phi}, {"psi", t.psi}};
  if (sys.branch == "laguerre-forsyth") {
    Expr J = sys.data.at("J");
    Expr b = simplify(J / dphi);
    out["b"] = b;
    out["H"] = simplify(total_derivative(ctx, b) / (J * b));
    out["a1"] = simplify(jac / dphi);
  } else if (sys.branch == "five") {
    out["a1"] = simplify(jac / sys.data.at("J"));
  } else if (sys.branch == "seven") {
    Expr a1 = simplify(jac / dphi);
    Expr a3 = simplify(jac / pow(dphi, 2));
    Expr a2 = simplify(a3 * total_derivative(ctx, a1) / a1);
    Expr fqq = diff(diff(ctx.f, "q"), "q");
    out["a1"] = a1;
    out["a3"] = a3;
    out["A"] = simplify(a2 + Expr(Rational(1, 6)) * a3 * fqq * Expr::symbol("q"));
  }
  return out;
}

}  // namespace trilin::testing
