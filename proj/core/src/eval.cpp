#include "trilin/eval.hpp"

#include <cmath>

#include "trilin/errors.hpp"

namespace trilin {

namespace {

long double real_power(long double b, const Rational& r) {
  long double e = to_long_double(r);
  if (b < 0) {
    if (r.get_den() % 2 == 0) throw NegativeEvenRoot();
    long double m = std::pow(-b, e);
    return r.get_num() % 2 == 0 ? m : -m;
  }
  if (b == 0 && sgn(r) < 0) throw DivisionByZero();
  return std::pow(b, e);
}

long double apply_function(const std::string& name, long double a) {
  if (name == "exp") return std::exp(a);
  if (name == "ln") {
    if (a <= 0) throw DomainError("logarithm of a non-positive number");
    return std::log(a);
  }
  if (name == "sin") return std::sin(a);
  if (name == "cos") return std::cos(a);
  throw UnsupportedNode("cannot evaluate '" + name + "'");
}

Value make_float(long double f) {
  Value v;
  v.exact = false;
  v.f = f;
  return v;
}

Value make_exact(Rational q) {
  Value v;
  v.q = std::move(q);
  return v;
}

class Evaluator {
 public:
  Evaluator(const Point& point, bool exact) : point_(point), exact_(exact) {}

  Value run(const Expr& e) {
    switch (e.kind()) {
      case Kind::Rational:
        return exact_ ? make_exact(e.value()) : make_float(to_long_double(e.value()));
      case Kind::Symbol: {
        auto it = point_.find(e.name());
        if (it == point_.end()) throw Error("no value for symbol '" + e.name() + "'");
        return exact_ ? make_exact(it->second) : make_float(to_long_double(it->second));
      }
      case Kind::Sum: {
        Value acc = make_exact(Rational(0));
        for (const auto& t : e.operands()) acc = add(acc, run(t));
        return acc;
      }
      case Kind::Product: {
        Value acc = make_exact(Rational(1));
        for (const auto& f : e.operands()) acc = mul(acc, run(f));
        return acc;
      }
      case Kind::Power:
        return power(run(e.base()), e.exponent());
      case Kind::Function:
        return make_float(apply_function(e.name(), run(e.argument()).approx()));
    }
    return make_exact(Rational(0));
  }

 private:
  static Value add(const Value& a, const Value& b) {
    if (a.exact && b.exact) return make_exact(a.q + b.q);
    return make_float(a.approx() + b.approx());
  }

  static Value mul(const Value& a, const Value& b) {
    if (a.exact && b.exact) return make_exact(a.q * b.q);
    return make_float(a.approx() * b.approx());
  }

  static Value power(const Value& b, const Rational& r) {
    if (b.exact) {
      if (sgn(b.q) == 0 && sgn(r) < 0) throw DivisionByZero();
      if (is_integer(r)) return make_exact(pow_int(b.q, r.get_num().get_si()));
      unsigned long d = r.get_den().get_ui();
      if (sgn(b.q) < 0 && d % 2 == 0) throw NegativeEvenRoot();
      if (auto root = exact_root(b.q, d)) {
        if (sgn(*root) == 0) return make_exact(Rational(0));
        return make_exact(pow_int(*root, r.get_num().get_si()));
      }
      return make_float(real_power(to_long_double(b.q), r));
    }
    if (is_integer(r)) {
      if (b.f == 0 && sgn(r) < 0) throw DivisionByZero();
      return make_float(std::pow(b.f, static_cast<long double>(r.get_num().get_si())));
    }
    return make_float(real_power(b.f, r));
  }

  const Point& point_;
  bool exact_;
};

}  // namespace

Value eval(const Expr& e, const Point& point, EvalMode mode) {
  return Evaluator(point, mode == EvalMode::Exact).run(e);
}

namespace {

long double run_float(const Expr& e, const FloatPoint& point) {
  switch (e.kind()) {
    case Kind::Rational:
      return to_long_double(e.value());
    case Kind::Symbol: {
      auto it = point.find(e.name());
      if (it == point.end()) throw Error("no value for symbol '" + e.name() + "'");
      return it->second;
    }
    case Kind::Sum: {
      long double acc = 0;
      for (const auto& t : e.operands()) acc += run_float(t, point);
      return acc;
    }
    case Kind::Product: {
      long double acc = 1;
      for (const auto& f : e.operands()) acc *= run_float(f, point);
      return acc;
    }
    case Kind::Power: {
      long double b = run_float(e.base(), point);
      const Rational& r = e.exponent();
      if (is_integer(r)) {
        if (b == 0 && sgn(r) < 0) throw DivisionByZero();
        return std::pow(b, static_cast<long double>(r.get_num().get_si()));
      }
      return real_power(b, r);
    }
    case Kind::Function:
      return apply_function(e.name(), run_float(e.argument(), point));
  }
  return 0;
}

}  // namespace

long double eval_float(const Expr& e, const FloatPoint& point) { return run_float(e, point); }

}  // namespace trilin
