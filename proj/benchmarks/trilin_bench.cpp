#include <benchmark/benchmark.h>

#include <random>

#include "trilin/classify.hpp"
#include "trilin/linearize.hpp"
#include "trilin/parse.hpp"
#include "trilin/poly.hpp"
#include "trilin/rational_nf.hpp"

namespace trilin {
namespace {

const char* kQuartic = "3*q^2/p - x*u^3*p^4";

Poly random_poly(std::mt19937_64& rng, std::size_t vars, int terms, int degree) {
  std::uniform_int_distribution<long> coef(-20, 20);
  std::uniform_int_distribution<int> power(0, degree);
  Poly out;
  for (int t = 0; t < terms; ++t) {
    Poly term(Rational(coef(rng)));
    for (std::size_t v = 0; v < vars; ++v) term = term * Poly::variable(v, power(rng));
    out = out + term;
  }
  return out;
}

void BM_Simplify(benchmark::State& state) {
  const Expr e = parse("(x + u)^4/(x^2 - u^2) - (x + u)^3/(x - u) + sin(x)^2 + cos(x)^2");
  for (auto _ : state) benchmark::DoNotOptimize(simplify(e));
}
BENCHMARK(BM_Simplify);

void BM_Normalize(benchmark::State& state) {
  const Expr e = parse("(x + u + p)^6 - (x + u)^6");
  for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
}
BENCHMARK(BM_Normalize);

void BM_Gcd(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto vars = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    Poly g = random_poly(rng, vars, 4, 3);
    Poly a = g * random_poly(rng, vars, 4, 3);
    Poly b = g * random_poly(rng, vars, 4, 3);
    state.ResumeTiming();
    benchmark::DoNotOptimize(gcd(a, b));
  }
}
BENCHMARK(BM_Gcd)->Arg(2)->Arg(3)->Arg(4);

void BM_ClassifyQuartic(benchmark::State& state) {
  const Expr f = parse(kQuartic);
  for (auto _ : state) benchmark::DoNotOptimize(classify(JetContext(f)));
}
BENCHMARK(BM_ClassifyQuartic)->Unit(benchmark::kMillisecond);

void BM_LinearizeQuartic(benchmark::State& state) {
  const Expr f = parse(kQuartic);
  LinearizeOptions opts;
  opts.target = Target::LaguerreForsyth;
  for (auto _ : state) benchmark::DoNotOptimize(linearize(JetContext(f), opts));
}
BENCHMARK(BM_LinearizeQuartic)->Unit(benchmark::kMillisecond);

void BM_LinearizeCubicCoefficient(benchmark::State& state) {
  const Expr f = parse("x^3*u");
  for (auto _ : state) benchmark::DoNotOptimize(linearize(JetContext(f)));
}
BENCHMARK(BM_LinearizeCubicCoefficient)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trilin

BENCHMARK_MAIN();
