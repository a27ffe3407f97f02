#include "trilin/zero_test.hpp"

#include <algorithm>
#include <cmath>

#include "trilin/errors.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {

std::string to_string(ZeroResult r) {
  switch (r) {
    case ZeroResult::Zero:
      return "Zero";
    case ZeroResult::NonZero:
      return "NonZero";
    case ZeroResult::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

RationalSampler::RationalSampler(std::uint64_t seed) : engine_(seed) {}

std::uint64_t RationalSampler::raw() { return engine_(); }

long RationalSampler::integer(long lo, long hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(raw() % span);
}

Rational RationalSampler::next(bool positive) {
  long den = integer(1, 64);
  long num = positive ? integer(1, 5 * den) : integer(-5 * den, 5 * den);
  return make_rational(num, den);
}

namespace {

bool near_zero(const Value& v) {
  return v.exact ? sgn(v.q) == 0 : std::fabs(static_cast<double>(v.f)) < 1e-12;
}

}  // namespace

ZeroDecision decide_zero(const Expr& e, const ZeroTestOptions& options) {
  ZeroDecision d;
  if (e.is_literal_zero()) {
    d.result = ZeroResult::Zero;
    d.exact = true;
    return d;
  }
  NFZero nz = nf_zero_test(e);
  if (nz != NFZero::Unknown) {
    d.result = nz == NFZero::Zero ? ZeroResult::Zero : ZeroResult::NonZero;
    d.exact = true;
    return d;
  }

  std::set<std::string> symbols = free_symbols(e);
  if (options.singular_hint) {
    auto extra = free_symbols(*options.singular_hint);
    symbols.insert(extra.begin(), extra.end());
  }
  std::vector<Expr> terms = e.is(Kind::Sum) ? e.operands() : std::vector<Expr>{e};
  RationalSampler sampler(options.seed);
  int ambiguous = 0;
  for (int attempt = 0; attempt < options.max_attempts && d.points_used < options.samples;
       ++attempt) {
    bool positive = attempt >= options.max_attempts / 2;
    Point point;
    for (const auto& s : symbols) point[s] = sampler.next(positive);
    Value total;
    total.q = 0;
    long double scale = 0;
    try {
      if (options.singular_hint && near_zero(eval(*options.singular_hint, point))) continue;
      for (const auto& t : terms) {
        Value v = eval(t, point);
        scale = std::max(scale, std::fabs(v.approx()));
        if (total.exact && v.exact) {
          total.q += v.q;
        } else {
          total.f = total.approx() + v.approx();
          total.exact = false;
        }
      }
    } catch (const DivisionByZero&) {
      continue;
    } catch (const NegativeEvenRoot&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(static_cast<double>(total.approx()))) continue;
    ++d.points_used;
    if (total.exact) {
      if (sgn(total.q) != 0) {
        d.result = ZeroResult::NonZero;
        d.witness = point;
        return d;
      }
      continue;
    }
    long double mag = std::fabs(total.f);
    if (mag <= options.abs_tol * (1 + scale)) continue;
    if (mag > options.reject_tol * (1 + scale)) {
      d.result = ZeroResult::NonZero;
      d.witness = point;
      return d;
    }
    ++ambiguous;
  }
  if (d.points_used == 0) throw EvaluationDomain("no admissible sample point found");
  d.result = ambiguous == 0 ? ZeroResult::Zero : ZeroResult::Unknown;
  return d;
}

ZeroResult is_zero(const Expr& e, const ZeroTestOptions& options) {
  return decide_zero(e, options).result;
}

}  // namespace trilin
