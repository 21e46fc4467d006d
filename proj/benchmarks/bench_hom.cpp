#include <benchmark/benchmark.h>

#include <vector>

#include "qfc/comb.hpp"
#include "qfc/hom.hpp"

namespace {

qfc::CombSpec comb_of(int num_pairs) {
  return qfc::CombSpec::create(193e12, 362e9, num_pairs,
                               qfc::default_linewidth_hz(),
                               qfc::uniform_profile(num_pairs));
}

std::vector<double> delay_grid(int n) {
  std::vector<double> d(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    d[static_cast<size_t>(i)] = -4e-9 + 8e-9 * i / (n - 1);
  return d;
}

void BM_HomCoincidence(benchmark::State& state) {
  const qfc::CombSpec spec = comb_of(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfc::hom_coincidence(spec, 0.3e-9));
  }
}
BENCHMARK(BM_HomCoincidence)->Arg(0)->Arg(5)->Arg(20)->Arg(50);

void BM_HomTrace(benchmark::State& state) {
  const qfc::CombSpec spec = comb_of(static_cast<int>(state.range(0)));
  const std::vector<double> delays = delay_grid(1001);
  for (auto _ : state) {
    auto tr = qfc::hom_trace(spec, delays);
    benchmark::DoNotOptimize(tr.rate.data());
  }
  state.SetItemsProcessed(state.iterations() * 1001);
}
BENCHMARK(BM_HomTrace)->Arg(0)->Arg(5)->Arg(20)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
