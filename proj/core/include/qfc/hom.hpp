#pragma once

#include <vector>

#include "qfc/comb.hpp"
#include "qfc/measurement.hpp"

namespace qfc {

// Two-photon interference of the bunched (same-path) component as a function
// of the relative arrival delay. For a comb with pair weights p_k and
// Lorentzian lines the coincidence probability is
//
//   P(tau) = 1/2 * (1 - sum_k p_|k| * exp(-2*pi*gbar_k*|tau|)
//                          * cos(4*pi*k*fsr*tau)),
//
// with gbar_k the mean of the +k and -k linewidths: a dip of full width
// ln(2)/(pi*gamma) at half depth, revived every 1/(2*fsr) by the beat between
// bin pairs. Noise rescales the modulation by the visibility ceiling below.
struct HomTrace {
  std::vector<double> delay_s;
  std::vector<double> rate;      // coincidence probability, ideal peak 1/2
  std::vector<double> envelope;  // guaranteed lower bound for rate
};

double hom_coincidence(const CombSpec& spec, double tau_s,
                       const NoiseModel& noise = {});

HomTrace hom_trace(const CombSpec& spec, const std::vector<double>& delays_s,
                   const NoiseModel& noise = {});

// Largest achievable dip contrast under the noise model:
// (1-a)/(1+a) * 2t/(1+t^2). Phase jitter does not enter (no pump phase here).
double hom_visibility_ceiling(const NoiseModel& noise);

// 1 - P(0)/P(baseline), taken from a sampled trace. Requires a sample at
// |tau| <= 1e-6 * max|tau| and a baseline sample far enough out that the
// envelope has recovered to at least 0.4995 of the asymptote.
double hom_visibility(const HomTrace& trace);

// Delay spacing of the interference revivals, 1/(2*fsr).
double revival_period_s(const CombSpec& spec);

}  // namespace qfc
