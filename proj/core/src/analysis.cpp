#include "qfc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qfc {
namespace {

// One-sided Jacobi: rotate column pairs until all are mutually orthogonal;
// the singular values are then the column norms.
std::vector<double> jacobi_singular_values(std::vector<double> a, int rows,
                                           int cols) {
  auto col = [&](int j) { return a.data() + static_cast<size_t>(j) * rows; };
  const int max_sweeps = 60;
  const double tol = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        const double* cp = col(p);
        const double* cq = col(q);
        for (int i = 0; i < rows; ++i) {
          app += cp[i] * cp[i];
          aqq += cq[i] * cq[i];
          apq += cp[i] * cq[i];
        }
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) {
          continue;
        }
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(
            1.0 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta)), zeta);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        double* mp = col(p);
        double* mq = col(q);
        for (int i = 0; i < rows; ++i) {
          const double vp = mp[i];
          const double vq = mq[i];
          mp[i] = c * vp - s * vq;
          mq[i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (int j = 0; j < cols; ++j) {
    double n2 = 0.0;
    const double* cj = col(j);
    for (int i = 0; i < rows; ++i) n2 += cj[i] * cj[i];
    sv[j] = std::sqrt(n2);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

// Exact least-squares fit of y = c0 + c1 cos(w x) + c2 sin(w x) at fixed w.
// Returns the residual sum of squares and the coefficients.
struct LinearFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double rss = 0.0;
};

LinearFit fit_at_frequency(const std::vector<double>& x,
                           const std::vector<double>& y, double w) {
  const size_t n = x.size();
  // Normal equations for the 3-column design [1, cos(wx), sin(wx)].
  double s1 = 0, sc = 0, ss = 0, scc = 0, sss = 0, scs = 0;
  double sy = 0, syc = 0, sys = 0;
  for (size_t i = 0; i < n; ++i) {
    const double c = std::cos(w * x[i]);
    const double s = std::sin(w * x[i]);
    s1 += 1.0;
    sc += c;
    ss += s;
    scc += c * c;
    sss += s * s;
    scs += c * s;
    sy += y[i];
    syc += y[i] * c;
    sys += y[i] * s;
  }
  const double m[3][3] = {{s1, sc, ss}, {sc, scc, scs}, {ss, scs, sss}};
  const double b[3] = {sy, syc, sys};
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  LinearFit fit;
  if (std::abs(det) < 1e-300) {
    fit.c0 = sy / s1;
    fit.rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.c0;
      fit.rss += r * r;
    }
    return fit;
  }
  auto solve = [&](int k) {
    double mm[3][3];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) mm[r][c] = (c == k) ? b[r] : m[r][c];
    }
    const double d = mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) -
                     mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
                     mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]);
    return d / det;
  };
  fit.c0 = solve(0);
  fit.c1 = solve(1);
  fit.c2 = solve(2);
  fit.rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double c = std::cos(w * x[i]);
    const double s = std::sin(w * x[i]);
    const double r = y[i] - (fit.c0 + fit.c1 * c + fit.c2 * s);
    fit.rss += r * r;
  }
  return fit;
}

double golden_minimize(const std::vector<double>& x,
                       const std::vector<double>& y, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fit_at_frequency(x, y, c).rss;
  double fd = fit_at_frequency(x, y, d).rss;
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, hi); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fit_at_frequency(x, y, c).rss;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fit_at_frequency(x, y, d).rss;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> singular_values(const Matrix& m) {
  if (m.rows <= 0 || m.cols <= 0) {
    throw std::invalid_argument("empty matrix");
  }
  // Work on the transpose when rows < cols so columns stay short-and-many.
  int rows = m.rows, cols = m.cols;
  bool transpose = rows < cols;
  if (transpose) std::swap(rows, cols);
  std::vector<double> colmajor(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = transpose ? m.at(c, r) : m.at(r, c);
      colmajor[static_cast<size_t>(c) * rows + r] = v;
    }
  }
  return jacobi_singular_values(std::move(colmajor), rows, cols);
}

SchmidtResult schmidt_number(const Matrix& rates,
                             std::optional<double> background) {
  if (rates.rows <= 0 || rates.cols <= 0) {
    throw std::invalid_argument("empty matrix");
  }
  double bg;
  if (background) {
    bg = *background;
  } else if (rates.v.size() == 1) {
    // A single cell offers no off-signal reference; any positive 1x1 map is
    // one mode, so subtract nothing instead of nulling the only entry.
    bg = 0.0;
  } else {
    bg = *std::min_element(rates.v.begin(), rates.v.end());
  }
  Matrix amp(rates.rows, rates.cols);
  double total = 0.0;
  for (size_t i = 0; i < rates.v.size(); ++i) {
    const double r = std::max(0.0, rates.v[i] - bg);
    amp.v[i] = std::sqrt(r);
    total += r;
  }
  if (total <= 0.0) {
    throw std::domain_error(
        "no signal above background; Schmidt number undefined");
  }
  const std::vector<double> sv = singular_values(amp);
  double sum2 = 0.0;
  for (double s : sv) sum2 += s * s;
  SchmidtResult out;
  out.coefficients.reserve(sv.size());
  double sum_l2 = 0.0;
  for (double s : sv) {
    const double lambda = s * s / sum2;
    out.coefficients.push_back(lambda);
    sum_l2 += lambda * lambda;
  }
  out.schmidt_number = 1.0 / sum_l2;
  return out;
}

double effective_mode_number(double g2_zero) {
  if (!(g2_zero > 1.0 + 1e-12)) {
    throw std::domain_error("effective mode number needs g2(0) > 1");
  }
  return 1.0 / (g2_zero - 1.0);
}

double dimension_upper_bound(const std::vector<double>& g2_values) {
  double sum = 0.0;
  for (double g2 : g2_values) sum += effective_mode_number(g2);
  return sum;
}

SinusoidFit fit_sinusoid(const std::vector<double>& x,
                         const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("x and y lengths differ");
  }
  const size_t n = x.size();
  if (n < 4) {
    throw std::invalid_argument("need at least 4 samples");
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double spread = 0.0;
  double scale = 0.0;
  for (double v : y) {
    spread = std::max(spread, std::abs(v - mean));
    scale = std::max(scale, std::abs(v));
  }
  SinusoidFit out;
  if (spread <= 1e-14 * std::max(1.0, scale)) {
    out.offset = mean;
    return out;
  }

  // Frequency seed: peak of the detrended periodogram evaluated on a grid of
  // candidate frequencies (works for mildly nonuniform x too).
  const double span = x.back() - x.front();
  if (!(span > 0.0)) {
    throw std::invalid_argument("x must be increasing");
  }
  const int ncand = static_cast<int>(4 * n);
  const double wmax = std::numbers::pi * static_cast<double>(n - 1) / span;
  double best_w = 0.0;
  double best_power = -1.0;
  for (int j = 1; j <= ncand; ++j) {
    const double w = wmax * j / ncand;
    std::complex<double> z = 0.0;
    for (size_t i = 0; i < n; ++i) {
      z += (y[i] - mean) * std::polar(1.0, -w * x[i]);
    }
    const double power = std::norm(z);
    if (power > best_power) {
      best_power = power;
      best_w = w;
    }
  }
  const double step = wmax / ncand;
  const double lo = std::max(best_w - 2.0 * step, step * 1e-3);
  const double hi = best_w + 2.0 * step;
  const double w = golden_minimize(x, y, lo, hi);
  const LinearFit fit = fit_at_frequency(x, y, w);
  out.amplitude = std::hypot(fit.c1, fit.c2);
  out.angular_frequency = w;
  out.phase = std::atan2(-fit.c2, fit.c1);
  out.offset = fit.c0;
  out.residual_rms = std::sqrt(fit.rss / static_cast<double>(n));
  return out;
}

}  // namespace qfc
