#include <benchmark/benchmark.h>

#include <cmath>
#include <sstream>

#include "fxscale/panel.hpp"
#include "fxscale/synthgen.hpp"
#include "fxscale/tick_data.hpp"

using namespace fxscale;

namespace {

GenSpec stream_spec(size_t n, std::int64_t q) {
  GenSpec spec;
  for (size_t i = 0; i < n; ++i) {
    std::string code = "AAA";
    size_t v = i;
    for (int c = 2; c >= 0; --c) {
      code[static_cast<size_t>(c)] = static_cast<char>('A' + v % 26);
      v /= 26;
    }
    spec.pairs.push_back(code + "/USD");
    spec.rates.push_back(2.0 + 3.0 * static_cast<double>(i));
  }
  spec.bins = q;
  spec.trade_fraction = 0.25;
  spec.seed = 3;
  return spec;
}

UtcMillis bench_t0() {
  UtcMillis t;
  parse_iso8601("2007-06-03T00:00:00.000Z", t);
  return t;
}

// Poisson draws dominate panel generation; events/sec is the useful number.
void BM_GenPanel(benchmark::State& state) {
  const auto spec = stream_spec(16, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_panel(spec).quotes.counts.data());
  }
  state.SetItemsProcessed(state.iterations() * 16 * state.range(0));
}

void BM_GenTickStream(benchmark::State& state) {
  const auto spec = stream_spec(12, 10080);
  const Interval window{bench_t0(), add_minutes(bench_t0(), spec.bins)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_tick_stream(spec, window, 1).events.size());
  }
}

void BM_ParseTicks(benchmark::State& state) {
  const auto spec = stream_spec(12, 10080);
  const Interval window{bench_t0(), add_minutes(bench_t0(), spec.bins)};
  const auto stream = gen_tick_stream(spec, window, 1);
  std::ostringstream buf;
  serialize_tick_stream(stream, buf);
  const std::string csv = buf.str();
  for (auto _ : state) {
    std::istringstream in(csv);
    benchmark::DoNotOptimize(
        parse_tick_file(in, OrderPolicy::Strict).events.size());
  }
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(csv.size()));
}

void BM_BinCounts(benchmark::State& state) {
  const auto spec = stream_spec(12, 10080);
  const Interval window{bench_t0(), add_minutes(bench_t0(), spec.bins)};
  const auto stream = gen_tick_stream(spec, window, 1);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bin_counts(stream, EventKind::Quote, 1, window, stream.pair_universe,
                   threads)
            .counts.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(stream.events.size()));
}

void BM_Rebin(benchmark::State& state) {
  const auto panel = gen_panel(stream_spec(32, 40320)).quotes;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rebin(panel, 60).counts.data());
  }
}

}  // namespace

BENCHMARK(BM_GenPanel)->Arg(10080)->Arg(40320)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenTickStream)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParseTicks)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BinCounts)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rebin);
