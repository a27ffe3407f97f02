#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trilin/expr.hpp"

namespace trilin {

struct ParseOptions {
  std::vector<std::string> variables = {"x", "u", "p", "q"};
  std::vector<std::string> params;
};

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
// Exponents must reduce to rational constants. u' and u'' stand for p and q,
// ubar' and ubar'' for pbar and qbar.
Expr parse(std::string_view src, const ParseOptions& options);
Expr parse(std::string_view src, const std::vector<std::string>& params = {});

// Accepts either a bare right-hand side or "u''' = rhs".
Expr parse_ode(std::string_view src, const std::vector<std::string>& params = {});

// Variables of the target coordinates (xbar, ubar, pbar, qbar).
ParseOptions barred_options(const std::vector<std::string>& params = {});

}  // namespace trilin
