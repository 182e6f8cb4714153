#include <benchmark/benchmark.h>

#include "teamcomp/cluster.hpp"
#include "teamcomp/preprocess.hpp"
#include "teamcomp/rng.hpp"

namespace {

teamcomp::StatMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  teamcomp::Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform();
  }
  return teamcomp::matrix_from_values(std::move(m));
}

void BM_KMeans(benchmark::State& state) {
  const auto m = random_matrix(state.range(0), 21, 1);
  const int k = static_cast<int>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(teamcomp::kmeans_fit(m, k, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans)->Args({2000, 8})->Args({2000, 16})->Args({10000, 8})->Unit(benchmark::kMillisecond);

void BM_DpMeans(benchmark::State& state) {
  const auto m = random_matrix(state.range(0), 21, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(teamcomp::dpmeans_fit(m, 1.2, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DpMeans)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Assign(benchmark::State& state) {
  const auto m = random_matrix(state.range(0), 21, 3);
  const auto centroids = random_matrix(16, 21, 4).values;
  for (auto _ : state) benchmark::DoNotOptimize(teamcomp::assign_nearest(m, centroids));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Assign)->Arg(10000);

}  // namespace
