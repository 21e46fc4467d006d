#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>

#include "qfc/timetag.hpp"

namespace {

// One stream pair per requested size, reused across iterations so the
// benchmark times the correlator rather than the generator.
const qfc::StreamPair& cached_stream(int64_t tags_per_channel) {
  static std::map<int64_t, qfc::StreamPair> cache;
  auto it = cache.find(tags_per_channel);
  if (it == cache.end()) {
    qfc::StreamConfig cfg;
    cfg.pair_rate_hz = static_cast<double>(tags_per_channel);
    cfg.correlation_time_s = 1e-9;
    cfg.duration_s = 1.0;
    cfg.seed = 42;
    it = cache.emplace(tags_per_channel, qfc::generate_stream(cfg)).first;
  }
  return it->second;
}

void BM_CoincidenceHistogram(benchmark::State& state) {
  const qfc::StreamPair& p = cached_stream(state.range(0));
  for (auto _ : state) {
    auto h = qfc::coincidence_histogram(p.signal, p.idler, 100, 5000, 1.0);
    benchmark::DoNotOptimize(h.counts.data());
  }
  state.SetItemsProcessed(
      state.iterations() *
      static_cast<int64_t>(p.signal.size() + p.idler.size()));
}
BENCHMARK(BM_CoincidenceHistogram)->Arg(1 << 17)->Arg(1 << 20)->Arg(1 << 23);

void BM_CoincidenceHistogramChunked(benchmark::State& state) {
  const qfc::StreamPair& p = cached_stream(1 << 20);
  for (auto _ : state) {
    auto h = qfc::coincidence_histogram_chunked(
        p.signal, p.idler, 100, 5000, 1.0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(h.counts.data());
  }
}
BENCHMARK(BM_CoincidenceHistogramChunked)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_GenerateStream(benchmark::State& state) {
  qfc::StreamConfig cfg;
  cfg.pair_rate_hz = static_cast<double>(state.range(0));
  cfg.correlation_time_s = 1e-9;
  cfg.duration_s = 1.0;
  cfg.seed = 7;
  for (auto _ : state) {
    auto p = qfc::generate_stream(cfg);
    benchmark::DoNotOptimize(p.signal.data());
    ++cfg.seed;  // fresh substream; keeps runs honest about allocation
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateStream)->Arg(1 << 17)->Arg(1 << 20);

void BM_ThermalStream(benchmark::State& state) {
  qfc::ThermalConfig cfg;
  cfg.mean_rate_hz = static_cast<double>(state.range(0));
  cfg.correlation_time_s = 50e-9;
  cfg.num_modes = static_cast<int>(state.range(1));
  cfg.duration_s = 1.0;
  cfg.seed = 7;
  for (auto _ : state) {
    auto s = qfc::generate_thermal_stream(cfg);
    benchmark::DoNotOptimize(s.data());
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ThermalStream)->Args({1 << 17, 1})->Args({1 << 17, 5});

}  // namespace

BENCHMARK_MAIN();
