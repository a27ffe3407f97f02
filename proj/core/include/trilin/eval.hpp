#pragma once

#include <map>
#include <string>

#include "trilin/expr.hpp"

namespace trilin {

enum class EvalMode { Exact, Float };

// Exact when every operation stayed rational; otherwise a long double.
struct Value {
  bool exact = true;
  Rational q;
  long double f = 0;

  long double approx() const { return exact ? to_long_double(q) : f; }
  bool is_zero() const { return exact ? sgn(q) == 0 : f == 0; }
};

using Point = std::map<std::string, Rational>;
using FloatPoint = std::map<std::string, long double>;

// Throws DivisionByZero, NegativeEvenRoot, DomainError, or Error when a
// symbol has no value.
Value eval(const Expr& e, const Point& point, EvalMode mode = EvalMode::Exact);
long double eval_float(const Expr& e, const FloatPoint& point);

}  // namespace trilin
