#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trilin/ansatz.hpp"
#include "trilin/classify.hpp"
#include "trilin/errors.hpp"
#include "trilin/jet.hpp"

namespace trilin {

// Canonical form to aim for. Auto follows the classification and uses the
// Laguerre-Forsyth form for four symmetries.
enum class Target { Auto, Seven, Five, LaguerreForsyth, Yumaguzhin };

std::string to_string(Target t);
std::optional<Target> parse_target(const std::string& name);

struct LinearizeOptions {
  Target target = Target::Auto;
  // Yumaguzhin sign: +1, -1 or 0 to prefer a real coefficient (then +).
  int sign = 0;
  AnsatzOptions ansatz;
  ZeroTestOptions zero;
};

class NotLinearizable : public Error {
 public:
  explicit NotLinearizable(SymmetryClass c)
      : Error(describe(c)), classification(std::move(c)) {}
  SymmetryClass classification;
};

class IndeterminateClass : public Error {
 public:
  explicit IndeterminateClass(SymmetryClass c)
      : Error(describe(c)), classification(std::move(c)) {}
  SymmetryClass classification;
};

class AnsatzFailed : public Error {
 public:
  AnsatzFailed(DeterminingSystem residual_, std::string unknown_)
      : Error("no ansatz solution for " + unknown_), residual(std::move(residual_)),
        unknown(std::move(unknown_)) {}
  DeterminingSystem residual;
  std::string unknown;
};

// Yumaguzhin coefficient gbar(xbar). When imaginary, value holds gbar / i.
struct GCoefficient {
  Expr value;
  bool imaginary = false;
};

struct LinearizationResult {
  Verdict verdict = Verdict::Indeterminate;
  Target target = Target::Auto;
  PointTransformation transformation;
  Bindings auxiliaries;
  std::map<std::string, std::vector<Expr>> alternates;
  // ubar''' = fbar(xbar, ubar, pbar, qbar) when explicit_target, otherwise
  // the right-hand side already pulled back to (x, u, p, q).
  Expr fbar;
  bool explicit_target = true;
  Expr s;                    // Five
  std::optional<Expr> a;     // Laguerre-Forsyth: ubar''' = a(xbar)^3 ubar
  std::optional<GCoefficient> g;        // Yumaguzhin, chosen sign
  std::optional<GCoefficient> g_other;  // Yumaguzhin, opposite sign
  int sign = 0;
  Expr K;
  VerifyResult verification;
  DeterminingSystem system;
};

// Determining system of the requested branch. Throws WrongBranch when the
// branch does not match the classification, NotLinearizable and
// IndeterminateClass for the corresponding verdicts.
DeterminingSystem determining_system(const JetContext& ctx, Target target, int sign = 1,
                                     const ZeroTestOptions& zero = {});

// Throws NotLinearizable, IndeterminateClass, WrongBranch or AnsatzFailed.
LinearizationResult linearize(const JetContext& ctx, const LinearizeOptions& options = {});

// Finishes a determining system from user supplied values for some of the
// unknowns not yet fixed; the others are solved by ansatz. Throws
// AnsatzFailed when that search fails and Error when the values do not
// satisfy the system.
LinearizationResult complete(const JetContext& ctx, const DeterminingSystem& sys,
                             const Bindings& values, const LinearizeOptions& options = {});

// One-line summary, e.g. "xbar = u, ubar = -x; ubar''' = xbar^3*ubar; VERIFIED".
std::string describe(const LinearizationResult& r);
std::string describe(const GCoefficient& g);

}  // namespace trilin
