// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "tbss/kernels.hpp"
#include "tbss/rng.hpp"

using namespace tbss;

namespace {

void ProductSums(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0)), d = static_cast<int>(state.range(1));
  Rng rng(1);
  const Eigen::MatrixXd samples = rng.normal_matrix(20000, n);
  const auto table = kernels::packed_index_table(n, d);
  for (auto _ : state) {
    auto sums = parallel ? kernels::product_sums_omp(samples, table) : kernels::product_sums_serial(samples, table);
    benchmark::DoNotOptimize(sums.data());
  }
  state.SetItemsProcessed(state.iterations() * samples.rows() * table.rows());
}

void ModeProduct(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  DenseTensor t({static_cast<std::size_t>(n), static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                 static_cast<std::size_t>(n)});
  for (auto& x : t.data()) x = rng.normal();
  const Eigen::MatrixXd m = rng.normal_matrix(n, n);
  for (auto _ : state) {
    auto r = parallel ? kernels::mode_product_omp(t, m, 1) : kernels::mode_product_serial(t, m, 1);
    benchmark::DoNotOptimize(r.data().data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(ProductSums, serial, false)->Args({4, 4})->Args({8, 4})->Args({6, 3});
BENCHMARK_CAPTURE(ProductSums, omp, true)->Args({4, 4})->Args({8, 4})->Args({6, 3});
BENCHMARK_CAPTURE(ModeProduct, serial, false)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(ModeProduct, omp, true)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
