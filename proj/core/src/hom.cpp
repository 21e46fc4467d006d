#include "qfc/hom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfc {
namespace {

double mean_linewidth(const CombSpec& spec, int k) {
  return 0.5 * (spec.linewidth(k) + spec.linewidth(-k));
}

double ideal_coincidence(const CombSpec& spec, double tau) {
  const double at = std::abs(tau);
  double mod = 0.0;
  for (int k = -spec.num_pairs; k <= spec.num_pairs; ++k) {
    const double p = spec.profile(std::abs(k));
    if (p == 0.0) continue;
    const double decay =
        std::exp(-2.0 * std::numbers::pi * mean_linewidth(spec, k) * at);
    mod += p * decay *
           std::cos(4.0 * std::numbers::pi * k * spec.fsr_hz * tau);
  }
  return 0.5 * (1.0 - mod);
}

// Slowest decay rate among populated bin pairs; bounds the modulation from
// above, so 1/2*(1 - exp(...)) bounds the coincidence from below.
double slowest_linewidth(const CombSpec& spec) {
  double g = -1.0;
  for (int k = 0; k <= spec.num_pairs; ++k) {
    if (spec.profile(k) == 0.0) continue;
    const double gk = mean_linewidth(spec, k);
    if (g < 0.0 || gk < g) g = gk;
  }
  return g;
}

double with_noise(double ideal, double vmax) {
  return 0.5 * (1.0 - vmax) + vmax * ideal;
}

}  // namespace

double hom_visibility_ceiling(const NoiseModel& noise) {
  noise.validate();
  const double a = noise.accidental_fraction;
  const double t = noise.path_imbalance;
  return (1.0 - a) / (1.0 + a) * 2.0 * t / (1.0 + t * t);
}

double hom_coincidence(const CombSpec& spec, double tau_s,
                       const NoiseModel& noise) {
  spec.validate();
  return with_noise(ideal_coincidence(spec, tau_s),
                    hom_visibility_ceiling(noise));
}

HomTrace hom_trace(const CombSpec& spec, const std::vector<double>& delays_s,
                   const NoiseModel& noise) {
  spec.validate();
  if (delays_s.empty()) {
    throw std::invalid_argument("delay grid is empty");
  }
  const double vmax = hom_visibility_ceiling(noise);
  const double gmin = slowest_linewidth(spec);
  HomTrace trace;
  trace.delay_s = delays_s;
  trace.rate.reserve(delays_s.size());
  trace.envelope.reserve(delays_s.size());
  for (double tau : delays_s) {
    trace.rate.push_back(with_noise(ideal_coincidence(spec, tau), vmax));
    const double env =
        0.5 * (1.0 - std::exp(-2.0 * std::numbers::pi * gmin * std::abs(tau)));
    trace.envelope.push_back(with_noise(env, vmax));
  }
  return trace;
}

double hom_visibility(const HomTrace& trace) {
  if (trace.delay_s.empty()) {
    throw std::invalid_argument("empty trace");
  }
  size_t imin = 0, imax = 0;
  for (size_t i = 1; i < trace.delay_s.size(); ++i) {
    if (std::abs(trace.delay_s[i]) < std::abs(trace.delay_s[imin])) imin = i;
    if (std::abs(trace.delay_s[i]) > std::abs(trace.delay_s[imax])) imax = i;
  }
  const double far = std::abs(trace.delay_s[imax]);
  if (std::abs(trace.delay_s[imin]) > 1e-6 * far) {
    throw std::invalid_argument("trace has no zero-delay sample");
  }
  // The baseline must sit where the dip envelope has flattened out (within
  // 0.1% of the 1/2 asymptote), otherwise the contrast is computed against a
  // still-recovering shoulder.
  const double base = trace.rate[imax];
  if (trace.envelope[imax] < 0.4995 || base <= 0.0) {
    throw std::invalid_argument("baseline sample is not far enough out");
  }
  return std::clamp((base - trace.rate[imin]) / base, 0.0, 1.0);
}

double revival_period_s(const CombSpec& spec) {
  spec.validate();
  return 1.0 / (2.0 * spec.fsr_hz);
}

}  // namespace qfc
