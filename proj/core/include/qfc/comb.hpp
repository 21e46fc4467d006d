#pragma once

#include <complex>
#include <vector>

namespace qfc {

inline constexpr double speed_of_light_m_s = 299792458.0;

// Default resonance FWHM, calibrated so the single-resonance interference dip
// has a 1.57 ns full width at quarter-height. For a Lorentzian line of FWHM g
// the dip profile is 1/2*(1 - exp(-2*pi*g*|tau|)), which crosses 1/4 at
// |tau| = ln2/(2*pi*g); the full dip width is therefore ln2/(pi*g), and
// solving ln2/(pi*g) = 1.57 ns gives g ~ 140.5 MHz.
double default_linewidth_hz();

// Ring-resonator frequency comb around a degenerate (center) resonance.
// Bins are indexed k = -num_pairs .. +num_pairs; energy conservation pairs
// bin k with bin -k. pair_profile holds p_k for k = 0..num_pairs with the
// ordered-bin normalization p_0 + 2*sum_{k>=1} p_k = 1, so the weight of the
// unordered resonance pair {k,-k} is p_0 for k=0 and 2*p_k otherwise.
struct CombSpec {
  double degenerate_frequency_hz = 0.0;
  double fsr_hz = 0.0;
  int num_pairs = 0;
  std::vector<double> linewidth_hz;   // FWHM per bin, indexed k + num_pairs
  std::vector<double> pair_profile;   // p_k, k = 0..num_pairs

  int bin_count() const { return 2 * num_pairs + 1; }
  double linewidth(int k) const { return linewidth_hz[static_cast<size_t>(k + num_pairs)]; }
  // Ordered-bin weight p_|k|.
  double profile(int k) const { return pair_profile[static_cast<size_t>(k < 0 ? -k : k)]; }
  // Weight of the unordered resonance pair {k,-k}.
  double pair_weight(int k) const;

  // Throws std::invalid_argument on violated invariants (positive frequencies,
  // linewidth < fsr per bin, profile normalized to 1 within 1e-12).
  void validate() const;

  static CombSpec create(double degenerate_frequency_hz, double fsr_hz, int num_pairs,
                         double uniform_linewidth_hz, std::vector<double> pair_profile);
  static CombSpec create(double degenerate_frequency_hz, double fsr_hz, int num_pairs,
                         std::vector<double> per_bin_linewidth_hz, std::vector<double> pair_profile);
};

// p_k = 1/(2N+1) for every k; all ordered bins equally weighted.
std::vector<double> uniform_profile(int num_pairs);
// Degenerate resonance excluded: p_0 = 0, p_k = 1/(2N) for k = 1..N.
std::vector<double> pairs_only_profile(int num_pairs);
// Mildly decaying pair weights (p_0 = 0, pair weight of {k,-k} proportional to
// ratio^(k-1)); stand-in for a measured comb envelope, not a fitted one.
std::vector<double> decaying_profile(int num_pairs, double ratio = 0.95);

// Center frequency of bin k.
double mode_frequency(const CombSpec& spec, int k);

// Normalized Lorentzian line amplitude of bin k at absolute frequency nu:
// l_k(nu) = sqrt(g/(2*pi)) / ((nu - nu_k) - i*g/2), with integral |l_k|^2 = 1.
std::complex<double> line_amplitude(const CombSpec& spec, int k, double nu_hz);

// |l_k(nu)|^2 without the complex detour.
double line_intensity(const CombSpec& spec, int k, double nu_hz);

// Two-photon joint spectral intensity under strict pairwise energy
// conservation: sum over ordered bins k of p_|k| * |l_k(nu_s)|^2 * |l_-k(nu_i)|^2.
// Integrates to 1 over the full plane; symmetric under nu_s <-> nu_i.
double joint_spectral_intensity(const CombSpec& spec, double nu_s_hz, double nu_i_hz);

}  // namespace qfc
