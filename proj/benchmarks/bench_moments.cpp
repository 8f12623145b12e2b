#include <benchmark/benchmark.h>

#include <cmath>

#include "fxscale/moments.hpp"
#include "fxscale/scaling.hpp"
#include "fxscale/synthgen.hpp"

using namespace fxscale;

namespace {

GenSpec bench_spec(size_t n, std::int64_t q) {
  GenSpec spec;
  spec.pairs.reserve(n);
  spec.rates.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::string code = "AAA";
    size_t v = i;
    for (int c = 2; c >= 0; --c) {
      code[static_cast<size_t>(c)] = static_cast<char>('A' + v % 26);
      v /= 26;
    }
    spec.pairs.push_back(code + "/USD");
    spec.rates.push_back(
        10.0 * std::pow(1000.0, static_cast<double>(i) / (n - 1)));
  }
  spec.bins = q;
  spec.coupling_v = 0.1;
  spec.factor_memory = 0.9;
  spec.seed = 1;
  return spec;
}

void BM_CorrMatrix(benchmark::State& state) {
  const auto n = static_cast<size_t>(state.range(0));
  const auto panel = gen_panel(bench_spec(n, 10080)).quotes;
  for (auto _ : state) {
    benchmark::DoNotOptimize(corr_matrix(panel, 0).global_avg);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(n * n / 2) * 10080);
}

void BM_CorrMatrixThreaded(benchmark::State& state) {
  const auto panel = gen_panel(bench_spec(68, 10080)).quotes;
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(corr_matrix(panel, 0, threads).global_avg);
  }
}

void BM_LaggedCov(benchmark::State& state) {
  const auto panel = gen_panel(bench_spec(2, 10080)).quotes;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lagged_cov(panel.row(0), panel.row(1), 30).value);
  }
}

void BM_FitScaling(benchmark::State& state) {
  const auto panel = gen_panel(bench_spec(68, 10080)).quotes;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_scaling(panel).alpha);
  }
}

void BM_BootstrapScaling(benchmark::State& state) {
  const auto panel = gen_panel(bench_spec(50, 10080)).quotes;
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bootstrap_scaling(panel, 1000, 100, 7, 0.0, threads).estimate_sd);
  }
}

}  // namespace

BENCHMARK(BM_CorrMatrix)->Arg(10)->Arg(30)->Arg(68);
BENCHMARK(BM_CorrMatrixThreaded)->Arg(1)->Arg(2)->Arg(4);
BENCHMARK(BM_LaggedCov);
BENCHMARK(BM_FitScaling);
BENCHMARK(BM_BootstrapScaling)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
