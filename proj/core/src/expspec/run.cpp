#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "../quadrature.hpp"
#include "qfc/expspec.hpp"
#include "qfc/hom.hpp"
#include "qfc/state.hpp"
#include "qfc/timetag.hpp"

namespace qfc::expspec {

CombSpec SourceSpec::to_comb() const {
  std::vector<double> weights;
  switch (profile) {
    case ProfileKind::Uniform:
      weights = uniform_profile(num_pairs);
      break;
    case ProfileKind::PairsOnly:
      weights = pairs_only_profile(num_pairs);
      break;
    case ProfileKind::Decaying:
      weights = decaying_profile(num_pairs, decay_ratio);
      break;
    case ProfileKind::Explicit:
      weights = explicit_profile;
      break;
  }
  return CombSpec::create(degenerate_frequency_hz, fsr_hz, num_pairs,
                          linewidth_hz, weights);
}

NoiseModel NoiseSpec::to_model() const {
  NoiseModel m;
  m.accidental_fraction = accidental;
  m.path_imbalance = imbalance;
  m.phase_jitter_sigma = jitter_rad;
  m.validate();
  return m;
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  if (n == 1) {
    out.push_back(a);
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
  }
  return out;
}

CombSpec build_comb(const ExperimentSpec& spec) {
  try {
    return spec.source.to_comb();
  } catch (const std::exception& e) {
    throw RunError(e.what(), spec.locs.source);
  }
}

NoiseModel build_noise(const ExperimentSpec& spec) {
  try {
    return spec.noise.to_model();
  } catch (const std::exception& e) {
    throw RunError(e.what(), spec.locs.noise);
  }
}

// Post-splitter state with the filter chain applied, kept unrenormalized
// (via the returned scale) so that blocked amplitude reads as lost counts.
std::pair<TwoPhotonState, double> filtered_state(const CombSpec& comb,
                                                 const ExperimentSpec& spec,
                                                 double phi) {
  TwoPhotonState st = output_state(comb, phi, spec.phase.eq1_literal);
  double scale = 1.0;
  if (spec.filter.upper) {
    const std::set<int> pass(spec.filter.upper->begin(),
                             spec.filter.upper->end());
    auto [next, p] = apply_filter(st, Path::Upper, pass);
    st = std::move(next);
    scale *= p;
  }
  if (spec.filter.lower) {
    const std::set<int> pass(spec.filter.lower->begin(),
                             spec.filter.lower->end());
    auto [next, p] = apply_filter(st, Path::Lower, pass);
    st = std::move(next);
    scale *= p;
  }
  return {std::move(st), scale};
}

double ideal_pair_rate(const TwoPhotonState& st, double scale, Mode a, Mode b,
                       double imbalance) {
  if (scale == 0.0 || st.empty()) return 0.0;
  NoiseModel bare;
  bare.path_imbalance = imbalance;
  return scale * coincidence_rate(st, a, b, bare);
}

struct PathCombo {
  Path a, b;
  const char* name_a;
  const char* name_b;
};

constexpr std::array<PathCombo, 3> kCombos = {{
    {Path::Upper, Path::Upper, "upper", "upper"},
    {Path::Upper, Path::Lower, "upper", "lower"},
    {Path::Lower, Path::Lower, "lower", "lower"},
}};

// Jitter-averaged ideal cell rates for each path combination, before the
// accidental floor.
std::array<Matrix, 3> ideal_maps(const CombSpec& comb,
                                 const ExperimentSpec& spec,
                                 const NoiseModel& noise, double phi) {
  const int n = 2 * comb.num_pairs + 1;
  std::array<Matrix, 3> maps;
  for (Matrix& m : maps) m = Matrix(n, n);
  auto accumulate = [&](double p, double weight) {
    const auto [st, scale] = filtered_state(comb, spec, p);
    for (size_t c = 0; c < kCombos.size(); ++c) {
      for (int ka = -comb.num_pairs; ka <= comb.num_pairs; ++ka) {
        for (int kb = -comb.num_pairs; kb <= comb.num_pairs; ++kb) {
          const double r =
              ideal_pair_rate(st, scale, Mode{kCombos[c].a, ka},
                              Mode{kCombos[c].b, kb}, noise.path_imbalance);
          maps[c].at(ka + comb.num_pairs, kb + comb.num_pairs) += weight * r;
        }
      }
    }
  };
  if (noise.phase_jitter_sigma > 0.0) {
    const auto& gh = detail::gauss_hermite();
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    const double s = std::numbers::sqrt2 * noise.phase_jitter_sigma;
    for (int i = 0; i < detail::GaussHermite::n; ++i) {
      accumulate(phi + s * gh.x[i], norm * gh.w[i]);
    }
  } else {
    accumulate(phi, 1.0);
  }
  return maps;
}

double floor_for(const std::array<Matrix, 3>& maps, const NoiseModel& noise) {
  double peak = 0.0;
  for (const Matrix& m : maps) {
    for (double v : m.v) peak = std::max(peak, v);
  }
  if (noise.accidental_fraction <= 0.0) return 0.0;
  return noise.accidental_fraction / (1.0 - noise.accidental_fraction) * peak;
}

ResultTable run_matrix(const ExperimentSpec& spec, const CombSpec& comb,
                       const NoiseModel& noise) {
  const double phi = spec.phase.value_rad;
  const auto maps = ideal_maps(comb, spec, noise, phi);
  const double floor = floor_for(maps, noise);
  ResultTable t;
  t.columns = {"path_a", "path_b", "bin_a", "bin_b", "rate"};
  for (size_t c = 0; c < kCombos.size(); ++c) {
    for (int ka = -comb.num_pairs; ka <= comb.num_pairs; ++ka) {
      for (int kb = -comb.num_pairs; kb <= comb.num_pairs; ++kb) {
        t.rows.push_back(
            {std::string(kCombos[c].name_a), std::string(kCombos[c].name_b),
             static_cast<int64_t>(ka), static_cast<int64_t>(kb),
             maps[c].at(ka + comb.num_pairs, kb + comb.num_pairs) + floor});
      }
    }
  }
  return t;
}

void require_sweep(const ExperimentSpec& spec) {
  if (!spec.phase.sweep()) {
    throw RunError("this measurement needs a phase sweep (start/stop/steps)",
                   spec.locs.phase);
  }
}

ResultTable run_interference(const ExperimentSpec& spec, const CombSpec& comb,
                             const NoiseModel& noise) {
  require_sweep(spec);
  const std::vector<double> grid =
      linspace(spec.phase.start_rad, spec.phase.stop_rad, spec.phase.steps);
  std::vector<double> s_rate(grid.size(), 0.0);
  std::vector<double> c_rate(grid.size(), 0.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    const double s = detail::jitter_average(
        noise.phase_jitter_sigma, grid[i], [&](double p) {
          const auto [st, scale] = filtered_state(comb, spec, p);
          double sum = 0.0;
          for (int k : spec.measure.bins) {
            sum += ideal_pair_rate(st, scale, Mode{Path::Upper, k},
                                   Mode{Path::Upper, -k},
                                   noise.path_imbalance);
          }
          return sum;
        });
    const double c = detail::jitter_average(
        noise.phase_jitter_sigma, grid[i], [&](double p) {
          const auto [st, scale] = filtered_state(comb, spec, p);
          double sum = 0.0;
          for (int k : spec.measure.bins) {
            sum += ideal_pair_rate(st, scale, Mode{Path::Upper, k},
                                   Mode{Path::Lower, -k},
                                   noise.path_imbalance);
          }
          return sum;
        });
    s_rate[i] = s;
    c_rate[i] = c;
  }
  const double a = noise.accidental_fraction;
  const double s_floor =
      a > 0.0
          ? a / (1.0 - a) * *std::max_element(s_rate.begin(), s_rate.end())
          : 0.0;
  const double c_floor =
      a > 0.0
          ? a / (1.0 - a) * *std::max_element(c_rate.begin(), c_rate.end())
          : 0.0;
  ResultTable t;
  t.columns = {"phi_rad", "s_rate", "c_rate"};
  for (size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({grid[i], s_rate[i] + s_floor, c_rate[i] + c_floor});
  }
  return t;
}

ResultTable run_mzi(const ExperimentSpec& spec) {
  require_sweep(spec);
  const std::vector<double> grid =
      linspace(spec.phase.start_rad, spec.phase.stop_rad, spec.phase.steps);
  const PhaseTrace trace = classical_mzi_trace(grid);
  ResultTable t;
  t.columns = {"phi_rad", "transmission"};
  for (size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({trace.phi[i], trace.rate[i]});
  }
  return t;
}

ResultTable run_schmidt(const ExperimentSpec& spec, const CombSpec& comb,
                        const NoiseModel& noise) {
  const auto maps = ideal_maps(comb, spec, noise, spec.phase.value_rad);
  const double floor = floor_for(maps, noise);
  CorrelationMatrix cm;
  cm.path_a = Path::Upper;
  cm.path_b = Path::Upper;
  cm.phi = spec.phase.value_rad;
  cm.num_pairs = comb.num_pairs;
  cm.values = maps[0].v;
  for (double& v : cm.values) v += floor;
  try {
    const Matrix folded = pair_fold(cm, spec.measure.include_degenerate);
    const SchmidtResult res = schmidt_number(folded);
    ResultTable t;
    t.columns = {"mode_index", "coefficient", "schmidt_number"};
    for (size_t i = 0; i < res.coefficients.size(); ++i) {
      t.rows.push_back({static_cast<int64_t>(i), res.coefficients[i],
                        res.schmidt_number});
    }
    return t;
  } catch (const std::exception& e) {
    throw RunError(e.what(), spec.locs.measure);
  }
}

ResultTable run_g2_bounds(const ExperimentSpec& spec, const CombSpec& comb,
                          const NoiseModel& noise) {
  ResultTable t;
  t.columns = {"num_pairs", "schmidt_lower", "neff_upper"};
  for (int n = 1; n <= comb.num_pairs; ++n) {
    double total = 0.0;
    for (int k = 1; k <= n; ++k) total += 2.0 * comb.profile(k);
    if (total <= 0.0) {
      throw RunError("pair profile carries no weight in the first " +
                         std::to_string(n) + " pairs",
                     spec.locs.measure);
    }
    std::vector<double> weights(static_cast<size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
      weights[static_cast<size_t>(k)] = comb.profile(k) / total;
    }
    const CombSpec sub =
        CombSpec::create(comb.degenerate_frequency_hz, comb.fsr_hz, n,
                         comb.linewidth(0), weights);
    const TwoPhotonState st = output_state(sub, spec.phase.value_rad,
                                           spec.phase.eq1_literal);
    const CorrelationMatrix cm = correlation_matrix(
        st, Path::Upper, Path::Upper, noise, spec.phase.value_rad);
    try {
      const Matrix folded = pair_fold(cm, spec.measure.include_degenerate);
      const SchmidtResult res = schmidt_number(folded);
      t.rows.push_back({static_cast<int64_t>(n), res.schmidt_number,
                        spec.measure.neff * n});
    } catch (const std::exception& e) {
      throw RunError(e.what(), spec.locs.measure);
    }
  }
  return t;
}

ResultTable run_hom(const ExperimentSpec& spec, const CombSpec& comb,
                    const NoiseModel& noise) {
  if (spec.measure.delay_steps < 2 ||
      !(spec.measure.delay_stop_s > spec.measure.delay_start_s)) {
    throw RunError("hom_trace needs delay_start < delay_stop and >= 2 steps",
                   spec.locs.measure);
  }
  const std::vector<double> delays =
      linspace(spec.measure.delay_start_s, spec.measure.delay_stop_s,
               spec.measure.delay_steps);
  const HomTrace trace = hom_trace(comb, delays, noise);
  ResultTable t;
  t.columns = {"delay_s", "rate", "envelope"};
  for (size_t i = 0; i < delays.size(); ++i) {
    t.rows.push_back({trace.delay_s[i], trace.rate[i], trace.envelope[i]});
  }
  return t;
}

void save_streams(const ExperimentSpec& spec, const std::string& suffix,
                  const TagStream& ch0, const TagStream& ch1) {
  if (spec.output.stream_prefix.empty()) return;
  const std::vector<TaggedEvent> events = merge_streams(ch0, ch1);
  const std::string stem = spec.output.stream_prefix + suffix;
  try {
    if (spec.output.stream_format == OutputSpec::StreamFormat::Binary) {
      write_tags_binary(stem + ".bin", events);
    } else {
      write_tags_csv(stem + ".csv", events);
    }
  } catch (const std::exception& e) {
    throw RunError(e.what(), spec.locs.output);
  }
}

ResultTable run_timetags(const ExperimentSpec& spec, const CombSpec& comb) {
  const MeasureSpec& m = spec.measure;
  const double tau_c = m.correlation_time_s > 0.0
                           ? m.correlation_time_s
                           : 1.0 / (2.0 * std::numbers::pi * comb.linewidth(0));
  const int64_t bin_ps = std::llround(m.bin_width_s * 1e12);
  const int64_t span_ps = std::llround(m.span_s * 1e12);
  if (bin_ps < 1) {
    throw RunError("bin_width must be at least 1 ps", spec.locs.measure);
  }
  if (span_ps < bin_ps) {
    throw RunError("span must cover at least one bin", spec.locs.measure);
  }

  ResultTable t;
  try {
    if (m.scheme == TagScheme::Pairs) {
      StreamConfig cfg;
      cfg.pair_rate_hz = m.rate_hz;
      cfg.correlation_time_s = tau_c;
      cfg.duration_s = m.duration_s;
      cfg.efficiency = {m.efficiency_signal, m.efficiency_idler};
      cfg.dark_rate_hz = {m.dark_rate_signal_hz, m.dark_rate_idler_hz};
      cfg.jitter_sigma_s = m.time_jitter_s;
      cfg.seed = m.seed;
      const StreamPair streams = generate_stream(cfg);
      save_streams(spec, "", streams.signal, streams.idler);
      const CoincidenceHistogram h = coincidence_histogram(
          streams.signal, streams.idler, bin_ps, span_ps, m.duration_s);
      const std::vector<double> g2 = g2_normalized(h);
      t.columns = {"delay_ps", "counts", "g2"};
      for (size_t i = 0; i < h.counts.size(); ++i) {
        t.rows.push_back({h.bin_center_ps(i),
                          static_cast<int64_t>(h.counts[i]), g2[i]});
      }
    } else {
      t.columns = {"num_modes", "delay_ps", "counts", "g2"};
      for (int modes : m.modes) {
        ThermalConfig cfg;
        cfg.mean_rate_hz = m.rate_hz;
        cfg.correlation_time_s = tau_c;
        cfg.num_modes = modes;
        cfg.duration_s = m.duration_s;
        cfg.seed = m.seed + static_cast<uint64_t>(modes);
        const TagStream stream = generate_thermal_stream(cfg);
        const auto [arm_a, arm_b] = hbt_split(stream, cfg.seed);
        save_streams(spec, "_m" + std::to_string(modes), arm_a, arm_b);
        const CoincidenceHistogram h = coincidence_histogram(
            arm_a, arm_b, bin_ps, span_ps, m.duration_s);
        const std::vector<double> g2 = g2_normalized(h);
        for (size_t i = 0; i < h.counts.size(); ++i) {
          t.rows.push_back({static_cast<int64_t>(modes), h.bin_center_ps(i),
                            static_cast<int64_t>(h.counts[i]), g2[i]});
        }
      }
    }
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(e.what(), spec.locs.measure);
  }
  return t;
}

}  // namespace

ResultTable run(const ExperimentSpec& spec) {
  const CombSpec comb = build_comb(spec);
  const NoiseModel noise = build_noise(spec);
  switch (spec.measure.kind) {
    case MeasureKind::CorrelationMatrix:
      return run_matrix(spec, comb, noise);
    case MeasureKind::InterferenceTrace:
      return run_interference(spec, comb, noise);
    case MeasureKind::MziTrace:
      return run_mzi(spec);
    case MeasureKind::Schmidt:
      return run_schmidt(spec, comb, noise);
    case MeasureKind::G2Bounds:
      return run_g2_bounds(spec, comb, noise);
    case MeasureKind::HomTrace:
      return run_hom(spec, comb, noise);
    case MeasureKind::TimeTags:
      return run_timetags(spec, comb);
  }
  throw RunError("unhandled measurement kind", spec.locs.measure);
}

}  // namespace qfc::expspec
