#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qfc/comb.hpp"

using namespace qfc;

namespace {

constexpr double kNu0 = speed_of_light_m_s / 1555.68e-9;
constexpr double kFsr = 362e9;

CombSpec standard_comb(int n) {
  return CombSpec::create(kNu0, kFsr, n, default_linewidth_hz(), uniform_profile(n));
}

// Composite Simpson over [lo, hi]; n intervals (even).
template <typename F>
double simpson(F f, double lo, double hi, int n) {
  double h = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("default linewidth reproduces the 1.57 ns dip width") {
  // The bunched-pair dip has full width ln2/(pi*gamma) at half depth; the
  // default gamma is defined by pinning that width.
  double g = default_linewidth_hz();
  CHECK(std::numbers::ln2 / (std::numbers::pi * g) == doctest::Approx(1.57e-9).epsilon(1e-12));
  CHECK(g == doctest::Approx(140.5e6).epsilon(2e-3));
}

TEST_CASE("mode frequencies step by one fsr per bin") {
  CombSpec c = standard_comb(4);
  CHECK(mode_frequency(c, 0) == kNu0);
  CHECK(mode_frequency(c, 3) == doctest::Approx(kNu0 + 3 * kFsr).epsilon(1e-15));
  CHECK(mode_frequency(c, -4) == doctest::Approx(kNu0 - 4 * kFsr).epsilon(1e-15));
  CHECK_THROWS_AS((void)mode_frequency(c, 5), std::out_of_range);
  CHECK_THROWS_AS((void)mode_frequency(c, -5), std::out_of_range);
}

TEST_CASE("profile helpers are normalized over ordered bins") {
  SUBCASE("uniform") {
    CombSpec c = standard_comb(4);
    for (int k = -4; k <= 4; ++k) CHECK(c.profile(k) == doctest::Approx(1.0 / 9.0));
    CHECK(c.pair_weight(0) == doctest::Approx(1.0 / 9.0));
    CHECK(c.pair_weight(3) == doctest::Approx(2.0 / 9.0));
    double total = c.pair_weight(0);
    for (int k = 1; k <= 4; ++k) total += c.pair_weight(k);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("pairs_only excludes the degenerate bin") {
    auto p = pairs_only_profile(10);
    CHECK(p[0] == 0.0);
    for (int k = 1; k <= 10; ++k) CHECK(p[k] == doctest::Approx(1.0 / 20.0));
    CHECK_THROWS_AS(pairs_only_profile(0), std::invalid_argument);
  }
  SUBCASE("decaying pair weights fall geometrically") {
    auto p = decaying_profile(10, 0.95);
    CHECK(p[0] == 0.0);
    for (int k = 1; k < 10; ++k) CHECK(p[k + 1] / p[k] == doctest::Approx(0.95).epsilon(1e-12));
    double total = 0.0;
    for (int k = 1; k <= 10; ++k) total += 2.0 * p[k];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(decaying_profile(0, 0.95), std::invalid_argument);
  }
}

TEST_CASE("validate rejects malformed combs") {
  CombSpec good = standard_comb(2);
  CHECK_NOTHROW(good.validate());

  CombSpec c = good;
  c.fsr_hz = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = good;
  c.linewidth_hz[1] = 2 * kFsr;  // unresolved resonance
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = good;
  c.pair_profile = {0.5, 0.5};  // wrong length for num_pairs = 2
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = good;
  c.pair_profile = {0.5, 0.5, 0.5};  // p0 + 2*sum = 2.5
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = good;
  c.pair_profile = {1.4, 0.1, -0.3};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("line shape: peak, half maximum, unit area") {
  CombSpec c = standard_comb(2);
  double g = c.linewidth(1);
  double nu1 = mode_frequency(c, 1);

  // Peak intensity of a unit-area Lorentzian of FWHM g is 2/(pi*g).
  double peak = line_intensity(c, 1, nu1);
  CHECK(peak == doctest::Approx(2.0 / (std::numbers::pi * g)).epsilon(1e-12));
  CHECK(line_intensity(c, 1, nu1 + 0.5 * g) == doctest::Approx(0.5 * peak).epsilon(1e-12));
  CHECK(line_intensity(c, 1, nu1 - 0.5 * g) == doctest::Approx(0.5 * peak).epsilon(1e-12));

  // |amplitude|^2 agrees with the direct intensity.
  std::complex<double> a = line_amplitude(c, 1, nu1 + 0.37 * g);
  CHECK(std::norm(a) == doctest::Approx(line_intensity(c, 1, nu1 + 0.37 * g)).epsilon(1e-12));

  // Numeric area over +-1000 FWHM reaches 1 up to the analytic tail ~6e-4.
  auto f = [&](double nu) { return line_intensity(c, 1, nu); };
  double area = simpson(f, nu1 - 1000 * g, nu1 + 1000 * g, 200000);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("joint spectral intensity concentrates on conjugate bins") {
  CombSpec c = CombSpec::create(kNu0, kFsr, 3, default_linewidth_hz(), uniform_profile(3));
  double g = c.linewidth(0);

  double on = joint_spectral_intensity(c, mode_frequency(c, 2), mode_frequency(c, -2));
  double expected = c.profile(2) * 4.0 / (std::numbers::pi * std::numbers::pi * g * g);
  CHECK(on == doctest::Approx(expected).epsilon(1e-6));

  // Energy-violating cell: both photons on the same side of the comb.
  double off = joint_spectral_intensity(c, mode_frequency(c, 2), mode_frequency(c, 1));
  CHECK(on / off > 1e6);

  // Symmetric under exchange of the two photons.
  for (double d : {0.0, 0.3 * g, 2.0 * g, 0.5 * kFsr}) {
    double a = joint_spectral_intensity(c, mode_frequency(c, 1) + d, mode_frequency(c, -1) - 0.2 * g);
    double b = joint_spectral_intensity(c, mode_frequency(c, -1) - 0.2 * g, mode_frequency(c, 1) + d);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}
