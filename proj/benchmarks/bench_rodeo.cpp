#include <rodeo/derivative.hpp>
#include <rodeo/engines.hpp>
#include <rodeo/experiments.hpp>
#include <rodeo/noise.hpp>

#include <benchmark/benchmark.h>

using namespace rodeo;

namespace {

Dataset quad2(std::size_t n, std::size_t d)
{
  return generate({ ExampleName::quad2, n, d, 0.5, 1 }).data;
}

void BM_local_linear_fit(benchmark::State& state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = quad2(n, 10);
  const Vector x = Vector::Constant(10, 0.5);
  const Vector h = Vector::Constant(10, 0.6);
  for (auto _ : state)
    benchmark::DoNotOptimize(local_linear_fit(data, x, h, KernelSpec::gaussian()).mhat);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_local_linear_fit)->RangeMultiplier(4)->Range(128, 8192)->Complexity();

//! Z_j and s_j for every variable from one factored system.
void BM_derivative_stats(benchmark::State& state)
{
  const Dataset data = quad2(500, 10);
  const Vector x = Vector::Constant(10, 0.5);
  const Vector h = Vector::Constant(10, 0.6);
  for (auto _ : state) {
    const LocalSystem system(data, x, h, KernelSpec::gaussian());
    double acc = 0.0;
    for (std::size_t j = 0; j < 10; ++j)
      acc += derivative_stat(system, j, 0.5).s;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_derivative_stats);

void BM_rodeo_hard(benchmark::State& state)
{
  const Dataset data = quad2(500, 10);
  const Vector x = Vector::Constant(10, 0.5);
  RodeoConfig cfg;
  cfg.sigma = SigmaMode::known(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(rodeo_hard(data, x, cfg).estimate);
}
BENCHMARK(BM_rodeo_hard)->Unit(benchmark::kMillisecond);

void BM_nearest_pairs(benchmark::State& state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = quad2(n, 10);
  for (auto _ : state)
    benchmark::DoNotOptimize(nearest_pairs(data, default_pair_count(n)).max_distance());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_nearest_pairs)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();

} // namespace

BENCHMARK_MAIN();
