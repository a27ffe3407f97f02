#pragma once

#include <map>
#include <string>
#include <vector>

#include "trilin/expr.hpp"
#include "trilin/jet.hpp"
#include "trilin/zero_test.hpp"

namespace trilin {

// LaguerreForsyth: J^3 = W/54. Yumaguzhin: J^3 = -W/27.
enum class JScaling { LaguerreForsyth, Yumaguzhin };

std::string to_string(JScaling s);
Rational scaling_factor(JScaling s);

struct InvariantReport {
  JScaling scaling = JScaling::LaguerreForsyth;
  Expr W;
  Expr I1;
  Expr I2;
  Expr I7;
  // Fields below are meaningful only when j_applicable.
  bool j_applicable = false;
  Expr J;
  Expr I4;
  Expr I5;
  Expr I6;
  Expr I8;
  Expr K;
  Expr DxK;
  Expr I9;   // K_q
  Expr I10;  // K_p
  Expr I11;  // f_qq D_x K - 6 K_u
  Expr I12;  // K_x
  Expr Ku;
  std::map<std::string, ZeroResult> zero_flags;

  // Stored fields in a fixed order, skipping the inapplicable ones.
  std::vector<std::pair<std::string, Expr>> fields() const;
};

Expr compute_W(const JetContext& ctx);

// Cube root of scale * W, simplified to an explicit product when possible.
Expr compute_J(const Expr& W, JScaling scaling);

Expr compute_I8(const JetContext& ctx, const Expr& J);

InvariantReport compute_report(const JetContext& ctx, JScaling scaling = JScaling::LaguerreForsyth,
                               const ZeroTestOptions& options = {});

enum class Consistency { Consistent, Inconsistent };

// For f = a(x)^3 u: compares K with (2 a a'' - 3 a'^2) / a^4.
Consistency check_K_consistency(const InvariantReport& report, const Expr& a,
                                const ZeroTestOptions& options = {});

}  // namespace trilin
