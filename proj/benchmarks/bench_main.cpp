#include <benchmark/benchmark.h>

#include "invman/problem_io.hpp"
#include "invman/scaling.hpp"
#include "invman/validation.hpp"

namespace {

using namespace invman;

ManifoldProblem fixture(const char* name, int N) {
  ProblemSpec spec = load_problem_spec(std::string(INVMAN_FIXTURE_DIR) + "/" + name + ".json");
  spec.settings.N = N;
  return build_problem(spec);
}

void BM_CauchyProduct(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto ord = GradedOrdering::make(2, N);
  CoeffSeq u(ord), v(ord);
  for (std::size_t p = 0; p < ord->size(); ++p) {
    u[p] = Complex(1.0 / (1.0 + p), 0.5);
    v[p] = Complex(0.25, -1.0 / (2.0 + p));
  }
  for (auto _ : state) benchmark::DoNotOptimize(cauchy_product(u, v, 2 * N - 1));
}
BENCHMARK(BM_CauchyProduct)->Arg(30)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_NewtonLorenz(benchmark::State& state) {
  const auto problem = fixture("lorenz", static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(problem));
}
BENCHMARK(BM_NewtonLorenz)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DefectEvaluation(benchmark::State& state) {
  const auto par = newton_solve(fixture("lorenz", 30));
  const DefectEvaluator d(par);
  double g = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d(Scaling({g, 0.5 * g})));
    g = g < 20.0 ? g * 1.01 : 1.0;
  }
}
BENCHMARK(BM_DefectEvaluation)->Unit(benchmark::kMicrosecond);

void BM_ValidatorBuild(benchmark::State& state) {
  const auto par = newton_solve(fixture("bridge", static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(Validator(par).tail_bound());
}
BENCHMARK(BM_ValidatorBuild)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_RescaledBounds(benchmark::State& state) {
  const auto par = newton_solve(fixture("bridge", 30));
  const Validator v(par);
  const BoundMode mode = state.range(0) ? BoundMode::Interval : BoundMode::Floating;
  for (auto _ : state) benchmark::DoNotOptimize(v.bounds(Scaling::uniform(2, 1.3), mode, false));
}
BENCHMARK(BM_RescaledBounds)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
