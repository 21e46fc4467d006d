#pragma once

// Internal Gauss-Hermite machinery for phase-jitter averaging; not installed.

#include <cmath>
#include <numbers>
#include <vector>

namespace qfc::detail {

// Nodes and weights for n-point Gauss-Hermite quadrature (weight e^{-x^2}),
// computed by Newton iteration on the orthonormal recurrence.
struct GaussHermite {
  static constexpr int n = 21;
  std::vector<double> x, w;

  GaussHermite() {
    x.resize(n);
    w.resize(n);
    const int half = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
      if (i == 0) {
        z = std::sqrt(2.0 * n + 1.0) -
            1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
      } else if (i == 1) {
        z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
      } else if (i == 2) {
        z = 1.86 * z - 0.86 * x[0];
      } else if (i == 3) {
        z = 1.91 * z - 0.91 * x[1];
      } else {
        z = 2.0 * z - x[i - 2];
      }
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = std::pow(std::numbers::pi, -0.25);
        double p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / j) * p2 -
               std::sqrt(static_cast<double>(j - 1) / j) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double dz = p1 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = z;
      x[n - 1 - i] = -z;
      w[i] = 2.0 / (pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

inline const GaussHermite& gauss_hermite() {
  static const GaussHermite gh;
  return gh;
}

// E[f(phi + d)] with d ~ N(0, sigma^2): int e^{-x^2} f(phi + sqrt2*sigma*x).
template <typename F>
double jitter_average(double sigma, double phi, F&& f) {
  if (sigma <= 0.0) return f(phi);
  const auto& gh = gauss_hermite();
  const double scale = std::numbers::sqrt2 * sigma;
  double acc = 0.0;
  for (int i = 0; i < GaussHermite::n; ++i) {
    acc += gh.w[i] * f(phi + scale * gh.x[i]);
  }
  return acc / std::sqrt(std::numbers::pi);
}

}  // namespace qfc::detail
