#pragma once

#include <optional>
#include <vector>

namespace qfc {

// Minimal dense row-major matrix of nonnegative rates.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
};

// Singular values (descending) by one-sided Jacobi orthogonalization.
// Dependency-free and adequate for the small matrices used here; cross-checked
// in the test suite against an independent implementation.
std::vector<double> singular_values(const Matrix& m);

struct SchmidtResult {
  double schmidt_number = 0.0;        // 1/sum(lambda^2), >= 1
  std::vector<double> coefficients;   // lambda_i, descending, sum to 1
};

// Schmidt-mode estimate from a coincidence-rate matrix: subtract a uniform
// background (matrix minimum unless overridden; 0 for a single-cell matrix,
// which has no off-signal reference), clamp at zero, take the entrywise
// square root as the amplitude proxy, then SVD.
// Throws std::domain_error if nothing survives the background subtraction.
SchmidtResult schmidt_number(const Matrix& rates,
                             std::optional<double> background = std::nullopt);

// 1/(g2-1) for thermal marginals; g2 <= 1 (+1e-12) is a domain error.
double effective_mode_number(double g2_zero);

// Sum of effective mode numbers, one per resonance; empty list gives 0.
double dimension_upper_bound(const std::vector<double>& g2_values);

struct SinusoidFit {
  double amplitude = 0.0;          // >= 0
  double angular_frequency = 0.0;  // >= 0
  double phase = 0.0;              // y = offset + amplitude*cos(w*x + phase)
  double offset = 0.0;
  double residual_rms = 0.0;
};

// Least-squares sinusoid fit; the frequency is seeded from the discrete
// Fourier peak of the detrended data and refined by golden-section search on
// the exact least-squares residual. Needs >= 4 samples; a constant input
// returns amplitude 0 at frequency 0.
SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qfc
