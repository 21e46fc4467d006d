#pragma once

#include <cmath>
#include <set>
#include <vector>

#include "qfc/analysis.hpp"
#include "qfc/state.hpp"

namespace qfc {

// Detector-side imperfections. All three act on measured rates, never on
// amplitudes:
//  - accidental_fraction a in [0,1): uniform floor added to every cell, sized
//    so the floor is the fraction a of the largest measured (ideal + floor)
//    rate in the same dataset, i.e. floor = a/(1-a) * peak_ideal. A fitted
//    two-detector trace then shows visibility (1-a)/(1+a).
//  - path_imbalance t in (0,1]: amplitude transmission of the lower output
//    arm relative to the upper one; each lower-path photon multiplies the
//    coincidence rate by t.
//  - phase_jitter_sigma >= 0 (radians): Gaussian blur of the pump phase,
//    applied where the phase is known (trace and matrix sweeps).
struct NoiseModel {
  double accidental_fraction = 0.0;
  double path_imbalance = 1.0;
  double phase_jitter_sigma = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// Ideal coincidence rate between two detector modes of a post-splitter state:
// multiplicity * |A|^2 * T(a) * T(b), where the multiplicity is 2 when both
// detectors address the same mode (normally ordered two-fold counting of a
// doubly occupied mode) and 1 otherwise, and T is the arm transmission.
// The accidental floor is referenced to the peak ideal rate over all detector
// mode pairs of the state. Phase jitter does not apply to a single state.
double coincidence_rate(const TwoPhotonState& state, const Mode& det_a,
                        const Mode& det_b, const NoiseModel& noise = {});

// Full (2N+1)x(2N+1) frequency-bin coincidence map for one ordered pair of
// output paths. values[(bin_a+N)*(2N+1) + (bin_b+N)] is the rate with the
// path_a detector at bin_a and the path_b detector at bin_b.
struct CorrelationMatrix {
  Path path_a = Path::Upper;
  Path path_b = Path::Upper;
  double phi = std::nan("");  // metadata only; NaN when not applicable
  int num_pairs = 0;
  std::vector<double> values;

  int side() const { return 2 * num_pairs + 1; }
  double at(int bin_a, int bin_b) const;
  Matrix to_matrix() const;
};

// The accidental floor is shared across the three path combinations of the
// same state, so it is referenced to the state's global peak, not the peak of
// the one combination requested here.
CorrelationMatrix correlation_matrix(const TwoPhotonState& state, Path path_a,
                                     Path path_b, const NoiseModel& noise = {},
                                     double phi_metadata = std::nan(""));

// Signal/idler fold of a coincidence map: rows are positive bins, columns are
// negative bins (both in increasing |k|), so energy-conserving pairs land on
// the diagonal. include_degenerate prepends the bin-0 row and column.
Matrix pair_fold(const CorrelationMatrix& m, bool include_degenerate = false);

struct PhaseTrace {
  std::vector<double> phi;
  std::vector<double> rate;
};

// Coincidence rate between two fixed detector modes as the pump phase sweeps
// over phi_grid. Phase jitter is averaged per grid point by Gauss-Hermite
// quadrature; the accidental floor is referenced to the peak of this trace.
PhaseTrace interference_trace(const CombSpec& spec, const Mode& det_a,
                              const Mode& det_b,
                              const std::vector<double>& phi_grid,
                              const NoiseModel& noise = {},
                              bool eq1_literal = false);

// Single-photon Mach-Zehnder transmission cos^2(phi/2): one full fringe per
// 2*pi of phase, half the fringe density of the two-photon traces.
PhaseTrace classical_mzi_trace(const std::vector<double>& phi_grid);

// Fringe visibility amplitude/offset from a sinusoid fit, clamped to [0,1].
double visibility(const PhaseTrace& trace);

// Coincidence-to-accidental ratio in dB. Zero accidentals gives +infinity;
// negative inputs are invalid.
double car_db(double peak_rate, double accidental_rate);

}  // namespace qfc
