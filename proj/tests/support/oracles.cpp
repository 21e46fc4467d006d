#include "oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace oracle {

qfc::CombSpec random_comb(std::mt19937_64& rng, int max_pairs) {
  std::uniform_int_distribution<int> pick_n(0, max_pairs);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = pick_n(rng);
  const double fsr = 50e9 + 450e9 * u(rng);
  std::vector<double> gammas(static_cast<size_t>(2 * n + 1));
  for (double& g : gammas) g = 50e6 + 350e6 * u(rng);
  std::vector<double> profile(static_cast<size_t>(n + 1));
  double total = 0.0;
  for (size_t k = 0; k < profile.size(); ++k) {
    double w = 0.05 + u(rng);
    if (k == 0 && n > 0 && u(rng) < 0.3) w = 0.0;  // sometimes skip the center
    profile[k] = w;
    total += (k == 0 ? 1.0 : 2.0) * w;
  }
  for (double& w : profile) w /= total;
  return qfc::CombSpec::create(192e12 + 2e12 * u(rng), fsr, n, std::move(gammas),
                               std::move(profile));
}

std::vector<double> singular_values(const qfc::Matrix& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) e(r, c) = m.at(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

namespace {

// 7-point Gauss-Legendre rule on [-1,1], nodes by Newton iteration on P7.
struct Gl7 {
  double x[7];
  double w[7];
  Gl7() {
    const int n = 7;
    for (int i = 0; i < n; ++i) {
      // Chebyshev-like initial guess, then Newton on the Legendre recurrence.
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double step = p1 / dp;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const Gl7& gl7() {
  static const Gl7 rule;
  return rule;
}

double lorentz(double gamma, double u) {
  return (gamma / (2.0 * M_PI)) / (u * u + gamma * gamma / 4.0);
}

double lorentz_deriv(double gamma, double u) {
  double d = u * u + gamma * gamma / 4.0;
  return -(gamma / M_PI) * u / (d * d);
}

// Fourier transform of the unit-area Lorentzian intensity,
// G(omega) = integral L_gamma(u) * e^{i*omega*u} du. Real and even in omega,
// so only the cosine part is integrated. Composite Gauss-Legendre on [0, W]
// plus tail handling: exact arctan tail at omega = 0, two-term integration by
// parts otherwise. No use of the closed-form exp(-gamma*|omega|/2).
double lorentz_fourier(double gamma, double omega) {
  omega = std::abs(omega);
  if (omega == 0.0) {
    // Entire line has unit area; nothing to integrate.
    return 1.0;
  }
  // Truncation point: the residual after two integration-by-parts terms
  // scales like L''(W)/omega^3 ~ 3*gamma/(pi*W^4*omega^3). Ask for 1e-10.
  double w_trunc = std::pow(3.0 * gamma / (M_PI * 1e-10 * omega * omega * omega), 0.25);
  w_trunc = std::max(w_trunc, 50.0 * gamma);
  // Keep omega*W large so the oscillatory remainder estimate is valid.
  w_trunc = std::max(w_trunc, 40.0 / omega);

  double period = 2.0 * M_PI / omega;
  double h = std::min(gamma / 3.0, period / 8.0);
  long panels = static_cast<long>(std::ceil(w_trunc / h));
  h = w_trunc / static_cast<double>(panels);

  const Gl7& rule = gl7();
  double acc = 0.0;
  for (long p = 0; p < panels; ++p) {
    double a = h * static_cast<double>(p);
    double mid = a + h / 2.0;
    double half = h / 2.0;
    double s = 0.0;
    for (int i = 0; i < 7; ++i) {
      double u = mid + half * rule.x[i];
      s += rule.w[i] * lorentz(gamma, u) * std::cos(omega * u);
    }
    acc += s * half;
  }

  double tail = -lorentz(gamma, w_trunc) * std::sin(omega * w_trunc) / omega -
                lorentz_deriv(gamma, w_trunc) * std::cos(omega * w_trunc) / (omega * omega);
  // Even integrand: double the half-line result.
  return 2.0 * (acc + tail);
}

}  // namespace

double hom_probability(const qfc::CombSpec& spec, double tau_s) {
  // Interference visibility as a sum over ordered bins:
  //   V(tau) = sum_k p_|k| Re[e^{i*4*pi*k*fsr*tau} G_k(2*pi*tau) G_{-k}(2*pi*tau)]
  // with G_k the Fourier transform of bin k's line intensity (real-valued).
  double omega = 2.0 * M_PI * tau_s;
  double v = 0.0;
  for (int k = -spec.num_pairs; k <= spec.num_pairs; ++k) {
    double p = spec.profile(k);
    if (p <= 0.0) continue;
    double gk = lorentz_fourier(spec.linewidth(k), omega);
    double gmk = lorentz_fourier(spec.linewidth(-k), omega);
    double beat = std::cos(4.0 * M_PI * static_cast<double>(k) * spec.fsr_hz * tau_s);
    v += p * gk * gmk * beat;
  }
  return 0.5 * (1.0 - v);
}

std::vector<uint64_t> histogram_counts(const qfc::TagStream& a, const qfc::TagStream& b,
                                       int64_t bin_width_ps, int64_t span_ps) {
  if (bin_width_ps <= 0 || span_ps < 0) throw std::invalid_argument("bad histogram shape");
  int64_t m = (span_ps + bin_width_ps - 1) / bin_width_ps;
  std::vector<uint64_t> counts(static_cast<size_t>(2 * m + 1), 0);
  for (int64_t ta : a) {
    for (int64_t tb : b) {
      int64_t d2 = 2 * (tb - ta);
      for (int64_t c = -m; c <= m; ++c) {
        // Bin centered at c*w covers delays in [c*w - w/2, c*w + w/2).
        if (d2 >= 2 * c * bin_width_ps - bin_width_ps &&
            d2 < 2 * c * bin_width_ps + bin_width_ps) {
          ++counts[static_cast<size_t>(c + m)];
          break;
        }
      }
    }
  }
  return counts;
}

}  // namespace oracle
