#include <benchmark/benchmark.h>

#include <vector>

#include "qfc/comb.hpp"
#include "qfc/measurement.hpp"
#include "qfc/state.hpp"

namespace {

qfc::CombSpec comb_of(int num_pairs) {
  return qfc::CombSpec::create(193e12, 362e9, num_pairs,
                               qfc::default_linewidth_hz(),
                               qfc::uniform_profile(num_pairs));
}

void BM_OutputState(benchmark::State& state) {
  const qfc::CombSpec spec = comb_of(static_cast<int>(state.range(0)));
  double phi = 0.0;
  for (auto _ : state) {
    auto st = qfc::output_state(spec, phi);
    benchmark::DoNotOptimize(st.amplitudes.data());
    phi += 1e-3;
  }
}
BENCHMARK(BM_OutputState)->Arg(1)->Arg(10)->Arg(100);

void BM_CorrelationMatrix(benchmark::State& state) {
  const qfc::CombSpec spec = comb_of(static_cast<int>(state.range(0)));
  const qfc::TwoPhotonState st = qfc::output_state(spec, 0.7);
  for (auto _ : state) {
    auto cm =
        qfc::correlation_matrix(st, qfc::Path::Upper, qfc::Path::Upper);
    benchmark::DoNotOptimize(cm.values.data());
  }
}
BENCHMARK(BM_CorrelationMatrix)->Arg(1)->Arg(10)->Arg(40);

void BM_InterferenceTrace(benchmark::State& state) {
  const qfc::CombSpec spec = comb_of(10);
  const int points = static_cast<int>(state.range(0));
  std::vector<double> grid(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<size_t>(i)] = 4.0 * 3.14159265358979 * i / (points - 1);
  qfc::NoiseModel nm;
  nm.phase_jitter_sigma = 0.05;  // exercises the jitter quadrature path
  for (auto _ : state) {
    auto tr = qfc::interference_trace(spec, {qfc::Path::Upper, 1},
                                      {qfc::Path::Upper, -1}, grid, nm);
    benchmark::DoNotOptimize(tr.rate.data());
  }
  state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK(BM_InterferenceTrace)->Arg(101)->Arg(401);

}  // namespace

BENCHMARK_MAIN();
