#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "trilin/eval.hpp"
#include "trilin/expr.hpp"

namespace trilin {

enum class ZeroResult { Zero, NonZero, Unknown };

std::string to_string(ZeroResult r);

struct ZeroTestOptions {
  std::uint64_t seed = 20240611;
  int samples = 12;
  int max_attempts = 400;
  double abs_tol = 1e-9;
  double reject_tol = 1e-4;
  // Points where this vanishes are not sampled.
  std::optional<Expr> singular_hint;
};

struct ZeroDecision {
  ZeroResult result = ZeroResult::Unknown;
  bool exact = false;
  int points_used = 0;
  std::optional<Point> witness;  // a point with a non-zero value
};

ZeroDecision decide_zero(const Expr& e, const ZeroTestOptions& options = {});
ZeroResult is_zero(const Expr& e, const ZeroTestOptions& options = {});

// Deterministic source of sample points: rationals num/den with den <= 64
// and |num/den| <= 5, drawn from a 64-bit Mersenne twister.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed);
  Rational next(bool positive = false);
  std::uint64_t raw();
  // Uniform integer in [lo, hi].
  long integer(long lo, long hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace trilin
