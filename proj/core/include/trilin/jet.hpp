#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trilin/expr.hpp"
#include "trilin/zero_test.hpp"

namespace trilin {

// Right-hand side of u''' = f on the jet coordinates (x, u, p, q).
struct JetContext {
  Expr f;
  std::vector<std::string> params;
  // Sample points where this vanishes are skipped.
  std::optional<Expr> singular_hint;

  JetContext() = default;
  explicit JetContext(Expr rhs, std::vector<std::string> parameters = {},
                      std::optional<Expr> hint = std::nullopt)
      : f(std::move(rhs)), params(std::move(parameters)), singular_hint(std::move(hint)) {}
};

// D_x = d/dx + p d/du + q d/dp + f d/dq, applied n times. Placeholder
// symbols are differentiated through their declared arguments.
Expr total_derivative(const JetContext& ctx, const Expr& e, int n = 1,
                      const Placeholders* unknowns = nullptr);

// xbar = phi(x,u), ubar = psi(x,u).
struct PointTransformation {
  Expr phi;
  Expr psi;
  Expr jacobian;

  PointTransformation() = default;
  PointTransformation(Expr phi_, Expr psi_);
};

struct Prolongation {
  Expr ubar1;  // function of x, u, p
  Expr ubar2;  // function of x, u, p, q
};

// Throws DegenerateTransformation when D_x phi vanishes identically.
Prolongation prolong(const JetContext& ctx, const PointTransformation& t);

enum class VerifyStatus { Verified, Refuted, Unknown };
std::string to_string(VerifyStatus s);

struct VerifyResult {
  VerifyStatus status = VerifyStatus::Unknown;
  std::optional<Point> witness;
  Expr residual;
};

// Options for the residual zero test; the context hint is added on top.
ZeroTestOptions verify_options(const JetContext& ctx, const ZeroTestOptions& base);

// Checks that t maps u''' = f to ubar''' = fbar(xbar, ubar, pbar, qbar).
VerifyResult verify_transformation(const JetContext& ctx, const PointTransformation& t,
                                   const Expr& fbar, const ZeroTestOptions& options = {});

// Same identity with fbar already pulled back to (x, u, p, q).
VerifyResult verify_pulled_back(const JetContext& ctx, const PointTransformation& t,
                                const Expr& fbar_source, const ZeroTestOptions& options = {});

// Pullback sigma = {xbar -> phi, ubar -> psi, pbar -> ubar1, qbar -> ubar2}.
Bindings pullback_bindings(const PointTransformation& t, const Prolongation& pr);

// outer applied after inner; outer is written in the variables x, u.
PointTransformation compose(const PointTransformation& outer, const PointTransformation& inner);

// Inverse map written in the variables x, u (standing for xbar, ubar).
// Solves one equation at a time when it is linear in, or a single power of,
// one unknown. Even roots take the positive branch. Throws
// NoClosedFormInverse otherwise.
PointTransformation invert(const PointTransformation& t, const ZeroTestOptions& options = {});

// fbar(xbar, ubar, pbar, qbar) with verify_transformation(ctx, t, fbar)
// Verified. Throws NoClosedFormInverse when t cannot be inverted.
Expr pushforward(const JetContext& ctx, const PointTransformation& t,
                 const ZeroTestOptions& options = {});

// Solves equation = 0 for v when v enters linearly or as a single power
// c(rest) * v^n; even roots take the positive branch.
std::optional<Expr> solve_for(const Expr& equation, const std::string& v);

// Renames xbar, ubar, pbar, qbar to x, u, p, q.
Expr unbar(const Expr& e);
// Renames x, u, p, q to xbar, ubar, pbar, qbar.
Expr bar(const Expr& e);

}  // namespace trilin
