#pragma once

#include <string>

#include "trilin/expr.hpp"

namespace trilin {

enum class Format { Infix, Latex, Json };

// Infix output parses back to the same expression.
std::string print(const Expr& e, Format format = Format::Infix);
std::string to_infix(const Expr& e);
std::string to_latex(const Expr& e);
// {"kind": ..., "children": [...], "value": "a/b", "name": ...}; powers keep
// their exponent in "value".
std::string to_json(const Expr& e);
Expr from_json(const std::string& text);

}  // namespace trilin
