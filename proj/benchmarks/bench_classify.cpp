#include <benchmark/benchmark.h>

#include "teamcomp/classify.hpp"
#include "teamcomp/rng.hpp"

namespace {

// Team-count features: 16 integer columns in 0..5, labels tilted by column 0.
teamcomp::Dataset count_dataset(int n, std::uint64_t seed) {
  teamcomp::Rng rng(seed);
  teamcomp::Dataset d{Eigen::MatrixXd(n, 16), std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 16; ++j) d.x(i, j) = static_cast<double>(rng.index(6));
    d.y[static_cast<std::size_t>(i)] = rng.bernoulli(d.x(i, 0) / 5.0 * 0.6 + 0.2) ? 1 : 0;
  }
  return d;
}

void BM_LrTrain(benchmark::State& state) {
  const auto d = count_dataset(static_cast<int>(state.range(0)), 1);
  teamcomp::LrOptions options;
  options.learning_rate = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(teamcomp::lr_train(d, options, 1));
}
BENCHMARK(BM_LrTrain)->Arg(9000)->Unit(benchmark::kMillisecond);

void BM_GdaFit(benchmark::State& state) {
  const auto d = count_dataset(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(teamcomp::gda_fit(d));
}
BENCHMARK(BM_GdaFit)->Arg(9000)->Unit(benchmark::kMillisecond);

void BM_SvmTrain(benchmark::State& state) {
  const auto d = count_dataset(static_cast<int>(state.range(0)), 3);
  teamcomp::SvmOptions options;
  options.c = static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(teamcomp::svm_train(d, options, 1));
}
BENCHMARK(BM_SvmTrain)->Args({2000, 10})->Args({2000, 100})->Args({9000, 10})->Unit(benchmark::kMillisecond);

}  // namespace
