#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trilin/invariants.hpp"
#include "trilin/jet.hpp"

namespace trilin {

enum class Verdict { Seven, Five, Four, NotLinearizable, Indeterminate };

std::string to_string(Verdict v);

struct SymmetryClass {
  Verdict verdict = Verdict::Indeterminate;
  Expr s;  // Five: ubar''' = s ubar' + ubar
  Expr K;
  Expr DxK;
  // NotLinearizable: invariants whose test failed.
  std::vector<std::string> failing;
  // Indeterminate: invariants whose zero test was inconclusive.
  std::vector<std::string> undecided;
  std::vector<Expr> residual_conditions;
  InvariantReport report;
};

// Decision tree on a report computed in either scaling.
SymmetryClass classify_report(const InvariantReport& report);
SymmetryClass classify(const JetContext& ctx, const ZeroTestOptions& options = {});

// "four point symmetries; K = -3/u^4" and similar.
std::string describe(const SymmetryClass& c);

// Stratification of a linear ODE with symbolic parameters.
struct ConditionReport {
  Expr W;
  Expr W_numerator;  // seven symmetries exactly where this vanishes
  Expr DxK;          // where W does not vanish, five iff this vanishes
  bool dxk_identically_zero = false;
  // W_numerator solved for each parameter it contains linearly.
  std::vector<std::pair<std::string, Expr>> thresholds;
};

struct LinearClassification {
  std::optional<SymmetryClass> verdict;
  std::optional<ConditionReport> conditions;
};

// u''' = c1 u'' + c2 u' + c3 u + c4 with coefficients in x and params.
Expr linear_rhs(const Expr& c1, const Expr& c2, const Expr& c3, const Expr& c4);
LinearClassification classify_linear(const Expr& c1, const Expr& c2, const Expr& c3,
                                     const Expr& c4, const std::vector<std::string>& params,
                                     const ZeroTestOptions& options = {});

enum class BeamConstraint { Satisfied, Violated, Unknown };

std::string to_string(BeamConstraint b);

struct BeamCheck {
  BeamConstraint constraint = BeamConstraint::Unknown;
  Expr constraint_value;
  Expr rhs;  // M''' = -(1 + pa3/B) M' + (pa3 B'/B^2) M
  SymmetryClass classification;
};

// Flexural-rigidity constraint for the beam equation, B a function of x.
Expr beam_constraint(const Expr& B, const Expr& pa3);
Expr beam_rhs(const Expr& B, const Expr& pa3);
BeamCheck beam_constraint_check(const Expr& B, const std::string& pa3 = "pa3",
                                const ZeroTestOptions& options = {});

}  // namespace trilin
