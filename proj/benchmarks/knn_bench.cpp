#include <benchmark/benchmark.h>

#include <vector>

#include "eit/classifier.hpp"
#include "eit/random.hpp"

namespace {

void BM_KnnPredict(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  eit::Rng rng(3);
  eit::LabeledSet train;
  std::vector<double> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : row) v = rng.normal();
    train.add(row, i % 11 == 0 ? eit::EarnestClass::non_earnest : eit::EarnestClass::earnest);
  }
  std::vector<double> query(dim);
  for (double& v : query) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(eit::knn_predict(train, query, 5));
}
BENCHMARK(BM_KnnPredict)->Args({100, 16})->Args({1000, 16})->Args({1000, 768});

}  // namespace
