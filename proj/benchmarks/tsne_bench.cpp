#include <benchmark/benchmark.h>

#include "eit/projection.hpp"
#include "eit/random.hpp"

namespace {

eit::Matrix random_matrix(std::size_t rows, std::size_t cols) {
  eit::Rng rng(5);
  eit::Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

void BM_Tsne(benchmark::State& state) {
  const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 16);
  eit::TsneConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(eit::tsne(x, config));
}
BENCHMARK(BM_Tsne)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ConditionalAffinities(benchmark::State& state) {
  const auto d = eit::pairwise_squared_distances(random_matrix(static_cast<std::size_t>(state.range(0)), 16));
  for (auto _ : state) benchmark::DoNotOptimize(eit::conditional_affinities(d, 30.0));
}
BENCHMARK(BM_ConditionalAffinities)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
