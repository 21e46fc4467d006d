#include "qfc/comb.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qfc {

namespace {
constexpr double kProfileTol = 1e-12;
}

double default_linewidth_hz() {
  // ln2 / (pi * 1.57 ns); see header for the dip-width derivation.
  return std::numbers::ln2 / (std::numbers::pi * 1.57e-9);
}

double CombSpec::pair_weight(int k) const {
  const int a = k < 0 ? -k : k;
  return a == 0 ? pair_profile[0] : 2.0 * pair_profile[static_cast<size_t>(a)];
}

void CombSpec::validate() const {
  if (!(degenerate_frequency_hz > 0.0)) throw std::invalid_argument("comb: degenerate frequency must be positive");
  if (!(fsr_hz > 0.0)) throw std::invalid_argument("comb: fsr must be positive");
  if (num_pairs < 0) throw std::invalid_argument("comb: num_pairs must be >= 0");
  if (linewidth_hz.size() != static_cast<size_t>(bin_count()))
    throw std::invalid_argument("comb: need one linewidth per bin (" + std::to_string(bin_count()) + ")");
  for (double g : linewidth_hz) {
    if (!(g > 0.0)) throw std::invalid_argument("comb: linewidths must be positive");
    if (!(g < fsr_hz)) throw std::invalid_argument("comb: resonances must be resolved (linewidth < fsr)");
  }
  if (pair_profile.size() != static_cast<size_t>(num_pairs + 1))
    throw std::invalid_argument("comb: pair_profile needs num_pairs+1 entries");
  double total = 0.0;
  for (size_t k = 0; k < pair_profile.size(); ++k) {
    if (pair_profile[k] < 0.0) throw std::invalid_argument("comb: pair_profile entries must be >= 0");
    total += (k == 0 ? 1.0 : 2.0) * pair_profile[k];
  }
  if (std::abs(total - 1.0) > kProfileTol)
    throw std::invalid_argument("comb: pair_profile must satisfy p0 + 2*sum p_k = 1");
}

CombSpec CombSpec::create(double nu0, double fsr, int n, double gamma, std::vector<double> profile) {
  return create(nu0, fsr, n, std::vector<double>(static_cast<size_t>(2 * n + 1), gamma), std::move(profile));
}

CombSpec CombSpec::create(double nu0, double fsr, int n, std::vector<double> gammas, std::vector<double> profile) {
  CombSpec spec;
  spec.degenerate_frequency_hz = nu0;
  spec.fsr_hz = fsr;
  spec.num_pairs = n;
  spec.linewidth_hz = std::move(gammas);
  spec.pair_profile = std::move(profile);
  spec.validate();
  return spec;
}

std::vector<double> uniform_profile(int n) {
  return std::vector<double>(static_cast<size_t>(n + 1), 1.0 / (2.0 * n + 1.0));
}

std::vector<double> pairs_only_profile(int n) {
  if (n < 1) throw std::invalid_argument("pairs_only_profile: need at least one pair");
  std::vector<double> p(static_cast<size_t>(n + 1), 1.0 / (2.0 * n));
  p[0] = 0.0;
  return p;
}

std::vector<double> decaying_profile(int n, double ratio) {
  if (n < 1) throw std::invalid_argument("decaying_profile: need at least one pair");
  if (!(ratio > 0.0)) throw std::invalid_argument("decaying_profile: ratio must be positive");
  std::vector<double> p(static_cast<size_t>(n + 1), 0.0);
  double z = 0.0;
  for (int k = 1; k <= n; ++k) z += std::pow(ratio, k - 1);
  for (int k = 1; k <= n; ++k) p[static_cast<size_t>(k)] = std::pow(ratio, k - 1) / (2.0 * z);
  return p;
}

double mode_frequency(const CombSpec& spec, int k) {
  if (k < -spec.num_pairs || k > spec.num_pairs) throw std::out_of_range("mode_frequency: bin outside comb");
  return spec.degenerate_frequency_hz + static_cast<double>(k) * spec.fsr_hz;
}

std::complex<double> line_amplitude(const CombSpec& spec, int k, double nu_hz) {
  const double g = spec.linewidth(k);
  const double d = nu_hz - mode_frequency(spec, k);
  const double scale = std::sqrt(g / (2.0 * std::numbers::pi));
  return scale / std::complex<double>(d, -0.5 * g);
}

double line_intensity(const CombSpec& spec, int k, double nu_hz) {
  const double g = spec.linewidth(k);
  const double d = nu_hz - mode_frequency(spec, k);
  return (g / (2.0 * std::numbers::pi)) / (d * d + 0.25 * g * g);
}

double joint_spectral_intensity(const CombSpec& spec, double nu_s_hz, double nu_i_hz) {
  double v = 0.0;
  for (int k = -spec.num_pairs; k <= spec.num_pairs; ++k) {
    const double p = spec.profile(k);
    if (p == 0.0) continue;
    v += p * line_intensity(spec, k, nu_s_hz) * line_intensity(spec, -k, nu_i_hz);
  }
  return v;
}

}  // namespace qfc
