#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qfc/expspec.hpp"

namespace support {

// Uniformly scattered but always-parseable experiment spec: every field stays
// inside the ranges the parser enforces, and cross-field requirements (sweep
// for trace kinds, bins within the comb, profile shape) hold by construction.
inline qfc::expspec::ExperimentSpec random_spec(std::mt19937_64& rng) {
  using namespace qfc::expspec;
  auto u = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); };
  auto ui = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  ExperimentSpec s;

  static constexpr std::array<MeasureKind, 7> kinds = {
      MeasureKind::CorrelationMatrix, MeasureKind::InterferenceTrace,
      MeasureKind::MziTrace,          MeasureKind::Schmidt,
      MeasureKind::G2Bounds,          MeasureKind::HomTrace,
      MeasureKind::TimeTags,
  };
  s.measure.kind = kinds[static_cast<size_t>(ui(0, 6))];
  const bool needs_sweep = s.measure.kind == MeasureKind::InterferenceTrace ||
                           s.measure.kind == MeasureKind::MziTrace;

  s.source.degenerate_frequency_hz = 1e12 + u() * 5e14;
  s.source.fsr_hz = 1e9 + u() * 1e12;
  s.source.num_pairs =
      ui(s.measure.kind == MeasureKind::InterferenceTrace ? 1 : 0, 12);
  s.source.linewidth_hz = 1e5 + u() * 1e9;
  s.source.decay_ratio = 0.05 + 0.9 * u();
  int prof = ui(0, 3);
  if (s.source.num_pairs == 0 && (prof == 1 || prof == 2)) prof = 0;
  switch (prof) {
    case 0: s.source.profile = ProfileKind::Uniform; break;
    case 1: s.source.profile = ProfileKind::PairsOnly; break;
    case 2: s.source.profile = ProfileKind::Decaying; break;
    default: {
      s.source.profile = ProfileKind::Explicit;
      const int n = s.source.num_pairs;
      std::vector<double> w(static_cast<size_t>(n) + 1);
      for (double& x : w) x = 0.01 + u();
      double sum = w[0];
      for (int k = 1; k <= n; ++k) sum += 2.0 * w[static_cast<size_t>(k)];
      for (double& x : w) x /= sum;
      s.source.explicit_profile = std::move(w);
      break;
    }
  }

  s.phase.value_rad = (u() - 0.5) * 20.0;
  s.phase.start_rad = (u() - 0.5) * 20.0;
  s.phase.stop_rad = (u() - 0.5) * 20.0;
  s.phase.steps = (needs_sweep || u() < 0.5) ? ui(2, 500) : 0;
  s.phase.eq1_literal = u() < 0.5;

  auto sorted_bins = [&] {
    std::set<int> got;
    const int n = ui(0, 5);
    for (int i = 0; i < n; ++i) got.insert(ui(-12, 12));
    return std::vector<int>(got.begin(), got.end());
  };
  if (u() < 0.4) s.filter.upper = sorted_bins();
  if (u() < 0.4) s.filter.lower = sorted_bins();

  s.noise.accidental = u() * 0.9;
  s.noise.imbalance = 0.05 + 0.95 * u();
  s.noise.jitter_rad = u() * 0.3;

  if (s.measure.kind == MeasureKind::InterferenceTrace) {
    std::set<int> got;
    const int n = ui(1, std::min(3, s.source.num_pairs));
    for (int i = 0; i < n; ++i) got.insert(ui(1, s.source.num_pairs));
    s.measure.bins.assign(got.begin(), got.end());
  } else {
    s.measure.bins.clear();
    const int n = ui(1, 4);
    for (int i = 0; i < n; ++i) s.measure.bins.push_back(ui(-5, 20));
  }
  s.measure.include_degenerate = u() < 0.5;
  s.measure.neff = 0.1 + 5.0 * u();
  s.measure.delay_start_s = (u() - 0.5) * 1e-9;
  s.measure.delay_stop_s = s.measure.kind == MeasureKind::HomTrace
                               ? s.measure.delay_start_s + 1e-12 + u() * 1e-9
                               : (u() - 0.5) * 1e-9;
  s.measure.delay_steps = ui(2, 5000);
  s.measure.scheme = u() < 0.5 ? TagScheme::Pairs : TagScheme::HbtThermal;
  s.measure.rate_hz = u() * 1e6;
  s.measure.duration_s = 1e-3 + u();
  s.measure.correlation_time_s = u() * 1e-8;
  s.measure.bin_width_s = 1e-12 + u() * 1e-9;
  s.measure.span_s = u() * 1e-7;
  s.measure.efficiency_signal = u();
  s.measure.efficiency_idler = u();
  s.measure.dark_rate_signal_hz = u() * 1e4;
  s.measure.dark_rate_idler_hz = u() * 1e4;
  s.measure.time_jitter_s = u() * 1e-10;
  s.measure.modes.clear();
  for (int i = 0, n = ui(1, 3); i < n; ++i) s.measure.modes.push_back(ui(1, 8));
  s.measure.seed = std::uniform_int_distribution<uint64_t>(
      0, (uint64_t{1} << 53) - 1)(rng);

  static const std::vector<std::string> paths = {
      "-", "out.csv", "with space.json", "a,b\"c\".csv",
      "quote\"inside", "back\\slash", "",
  };
  s.output.path = paths[static_cast<size_t>(ui(0, 6))];
  s.output.format =
      u() < 0.5 ? OutputSpec::Format::Csv : OutputSpec::Format::Json;
  if (u() < 0.5) {
    s.output.stream_prefix = paths[static_cast<size_t>(ui(1, 6))];
  }
  s.output.stream_format = u() < 0.5 ? OutputSpec::StreamFormat::Binary
                                     : OutputSpec::StreamFormat::Csv;
  return s;
}

}  // namespace support
