#include "qfc/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace qfc {
namespace {

double arm_transmission(Path p, double imbalance) {
  return p == Path::Lower ? imbalance : 1.0;
}

void require_post_splitter(const TwoPhotonState& state) {
  if (state.stage != Stage::PostSplitter) {
    throw std::invalid_argument(
        "coincidence measurement requires a post-splitter state");
  }
}

double ideal_rate(const TwoPhotonState& state, const Mode& det_a,
                  const Mode& det_b, double imbalance) {
  if (is_pre_splitter(det_a.path) || is_pre_splitter(det_b.path)) {
    throw std::invalid_argument("detectors sit on output paths");
  }
  const ModePair key = ModePair::make(det_a, det_b);
  const std::complex<double> a = state.amplitude(key);
  const double mult = (det_a == det_b) ? 2.0 : 1.0;
  const double t = arm_transmission(det_a.path, imbalance) *
                   arm_transmission(det_b.path, imbalance);
  return mult * std::norm(a) * t;
}

// Peak ideal rate over every detector mode pair the state can fire, used as
// the reference for the accidental floor.
double peak_ideal_rate(const TwoPhotonState& state, double imbalance) {
  double peak = 0.0;
  for (const auto& [pair, amp] : state.amplitudes) {
    const double mult = pair.degenerate() ? 2.0 : 1.0;
    const double t = arm_transmission(pair.a.path, imbalance) *
                     arm_transmission(pair.b.path, imbalance);
    peak = std::max(peak, mult * std::norm(amp) * t);
  }
  return peak;
}

double accidental_floor(double peak_ideal, double fraction) {
  if (fraction <= 0.0) return 0.0;
  return fraction / (1.0 - fraction) * peak_ideal;
}

}  // namespace

void NoiseModel::validate() const {
  if (!(accidental_fraction >= 0.0) || accidental_fraction >= 1.0) {
    throw std::invalid_argument("accidental_fraction must lie in [0, 1)");
  }
  if (!(path_imbalance > 0.0) || path_imbalance > 1.0) {
    throw std::invalid_argument("path_imbalance must lie in (0, 1]");
  }
  if (!(phase_jitter_sigma >= 0.0)) {
    throw std::invalid_argument("phase_jitter_sigma must be >= 0");
  }
}

double coincidence_rate(const TwoPhotonState& state, const Mode& det_a,
                        const Mode& det_b, const NoiseModel& noise) {
  noise.validate();
  require_post_splitter(state);
  const double ideal = ideal_rate(state, det_a, det_b, noise.path_imbalance);
  const double peak = peak_ideal_rate(state, noise.path_imbalance);
  return ideal + accidental_floor(peak, noise.accidental_fraction);
}

double CorrelationMatrix::at(int bin_a, int bin_b) const {
  const int n = side();
  const int ia = bin_a + num_pairs;
  const int ib = bin_b + num_pairs;
  if (ia < 0 || ia >= n || ib < 0 || ib >= n) {
    throw std::out_of_range("bin outside the comb");
  }
  return values[static_cast<size_t>(ia) * n + ib];
}

Matrix CorrelationMatrix::to_matrix() const {
  Matrix m(side(), side());
  m.v = values;
  return m;
}

CorrelationMatrix correlation_matrix(const TwoPhotonState& state, Path path_a,
                                     Path path_b, const NoiseModel& noise,
                                     double phi_metadata) {
  noise.validate();
  require_post_splitter(state);
  if (is_pre_splitter(path_a) || is_pre_splitter(path_b)) {
    throw std::invalid_argument("correlation map addresses output paths");
  }
  CorrelationMatrix m;
  m.path_a = path_a;
  m.path_b = path_b;
  m.phi = phi_metadata;
  m.num_pairs = state.basis.num_pairs;
  const int n = m.side();
  m.values.assign(static_cast<size_t>(n) * n, 0.0);
  const double floor = accidental_floor(
      peak_ideal_rate(state, noise.path_imbalance), noise.accidental_fraction);
  for (int ka = -m.num_pairs; ka <= m.num_pairs; ++ka) {
    for (int kb = -m.num_pairs; kb <= m.num_pairs; ++kb) {
      const double r = ideal_rate(state, Mode{path_a, ka}, Mode{path_b, kb},
                                  noise.path_imbalance);
      m.values[static_cast<size_t>(ka + m.num_pairs) * n + (kb + m.num_pairs)] =
          r + floor;
    }
  }
  return m;
}

Matrix pair_fold(const CorrelationMatrix& m, bool include_degenerate) {
  const int n = m.num_pairs;
  const int lo = include_degenerate ? 0 : 1;
  const int side = n - lo + 1;
  if (side <= 0) {
    throw std::invalid_argument("no nondegenerate pairs to fold");
  }
  Matrix out(side, side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      out.at(i, j) = m.at(lo + i, -(lo + j));
    }
  }
  return out;
}

PhaseTrace interference_trace(const CombSpec& spec, const Mode& det_a,
                              const Mode& det_b,
                              const std::vector<double>& phi_grid,
                              const NoiseModel& noise, bool eq1_literal) {
  noise.validate();
  spec.validate();
  if (phi_grid.empty()) {
    throw std::invalid_argument("phase grid is empty");
  }
  PhaseTrace trace;
  trace.phi = phi_grid;
  trace.rate.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    const double r =
        detail::jitter_average(noise.phase_jitter_sigma, phi, [&](double p) {
          return ideal_rate(output_state(spec, p, eq1_literal), det_a, det_b,
                            noise.path_imbalance);
        });
    trace.rate.push_back(r);
  }
  const double peak =
      *std::max_element(trace.rate.begin(), trace.rate.end());
  const double floor = accidental_floor(peak, noise.accidental_fraction);
  for (double& r : trace.rate) r += floor;
  return trace;
}

PhaseTrace classical_mzi_trace(const std::vector<double>& phi_grid) {
  if (phi_grid.empty()) {
    throw std::invalid_argument("phase grid is empty");
  }
  PhaseTrace trace;
  trace.phi = phi_grid;
  trace.rate.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    const double c = std::cos(0.5 * phi);
    trace.rate.push_back(c * c);
  }
  return trace;
}

double visibility(const PhaseTrace& trace) {
  const SinusoidFit fit = fit_sinusoid(trace.phi, trace.rate);
  if (fit.offset <= 0.0) {
    return 0.0;
  }
  return std::clamp(fit.amplitude / fit.offset, 0.0, 1.0);
}

double car_db(double peak_rate, double accidental_rate) {
  if (peak_rate < 0.0 || accidental_rate < 0.0) {
    throw std::invalid_argument("rates must be nonnegative");
  }
  if (accidental_rate == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(peak_rate / accidental_rate);
}

}  // namespace qfc
