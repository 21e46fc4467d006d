#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qfc/analysis.hpp"
#include "qfc/comb.hpp"
#include "qfc/measurement.hpp"
#include "qfc/state.hpp"

using namespace qfc;

namespace {

constexpr double kNu0 = speed_of_light_m_s / 1555.68e-9;
constexpr double kFsr = 362e9;

Matrix diag(const std::vector<double>& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

}  // namespace

TEST_CASE("singular values agree with an independent SVD") {
  std::mt19937_64 rng(0xa11a);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix m(dim(rng), dim(rng));
    for (double& v : m.v) v = g(rng);
    auto mine = singular_values(m);
    auto ref = oracle::singular_values(m);
    REQUIRE(mine.size() == ref.size());
    for (size_t i = 0; i < mine.size(); ++i) {
      CHECK(std::abs(mine[i] - ref[i]) < 1e-10 * std::max(1.0, ref[0]));
    }
  }
}

TEST_CASE("schmidt number of simple rate matrices") {
  SUBCASE("rank-1 rates give exactly one mode") {
    Matrix m(4, 6);
    std::vector<double> u{0.9, 0.4, 0.2, 0.7}, v{1.0, 0.8, 0.6, 0.4, 0.3, 0.1};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 6; ++c) m.at(r, c) = u[r] * v[c];
    auto res = schmidt_number(m, 0.0);
    CHECK(res.schmidt_number == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("ten equal diagonal rates give ten modes") {
    auto res = schmidt_number(diag(std::vector<double>(10, 0.05)));
    CHECK(res.schmidt_number == doctest::Approx(10.0).epsilon(1e-9));
    REQUIRE(res.coefficients.size() == 10);
    for (double l : res.coefficients) CHECK(l == doctest::Approx(0.1).epsilon(1e-9));
  }

  SUBCASE("invariant under overall scale") {
    Matrix m(3, 3);
    m.v = {4.0, 0.1, 0.0, 0.1, 2.0, 0.2, 0.0, 0.2, 1.0};
    Matrix m2 = m;
    for (double& v : m2.v) v *= 137.0;
    CHECK(schmidt_number(m, 0.0).schmidt_number ==
          doctest::Approx(schmidt_number(m2, 0.0).schmidt_number).epsilon(1e-12));
  }

  SUBCASE("a uniform background is removed by default") {
    Matrix m = diag({0.3, 0.2, 0.1});
    Matrix noisy = m;
    for (double& v : noisy.v) v += 0.013;
    CHECK(schmidt_number(noisy).schmidt_number ==
          doctest::Approx(schmidt_number(m, 0.0).schmidt_number).epsilon(1e-12));
  }

  SUBCASE("background above every entry is a domain error") {
    Matrix m = diag({0.3, 0.2});
    CHECK_THROWS_AS(schmidt_number(m, 1.0), std::domain_error);
  }

  SUBCASE("empty matrix is rejected") {
    CHECK_THROWS_AS(schmidt_number(Matrix{}), std::invalid_argument);
  }
}

TEST_CASE("schmidt number from folded comb correlation maps") {
  SUBCASE("ten uniform nondegenerate pairs") {
    CombSpec c = CombSpec::create(kNu0, kFsr, 10, default_linewidth_hz(), pairs_only_profile(10));
    TwoPhotonState st = output_state(c, 0.0);
    Matrix f = pair_fold(correlation_matrix(st, Path::Upper, Path::Upper));
    auto res = schmidt_number(f, 0.0);
    CHECK(res.schmidt_number == doctest::Approx(10.0).epsilon(1e-9));
  }

  SUBCASE("uniform comb with the degenerate pair included") {
    CombSpec c = CombSpec::create(kNu0, kFsr, 10, default_linewidth_hz(), uniform_profile(10));
    TwoPhotonState st = output_state(c, 0.0);
    Matrix f = pair_fold(correlation_matrix(st, Path::Upper, Path::Upper), true);
    auto res = schmidt_number(f, 0.0);
    CHECK(res.schmidt_number == doctest::Approx(11.0).epsilon(1e-9));
  }

  SUBCASE("decaying profile matches the direct weight arithmetic") {
    CombSpec c = CombSpec::create(kNu0, kFsr, 10, default_linewidth_hz(), decaying_profile(10));
    TwoPhotonState st = output_state(c, 0.0);
    Matrix f = pair_fold(correlation_matrix(st, Path::Upper, Path::Upper));
    auto res = schmidt_number(f, 0.0);

    double s1 = 0.0, s2 = 0.0;
    for (int k = 1; k <= 10; ++k) {
      double w = c.pair_weight(k);
      s1 += w;
      s2 += w * w;
    }
    CHECK(res.schmidt_number == doctest::Approx(s1 * s1 / s2).epsilon(1e-9));
    CHECK(res.schmidt_number == doctest::Approx(9.789).epsilon(1e-3));
  }
}

TEST_CASE("effective mode number from thermal g2") {
  CHECK(effective_mode_number(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(effective_mode_number(1.2) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(effective_mode_number(1.0 + 1.0 / 1.039) == doctest::Approx(1.039).epsilon(1e-12));
  CHECK_THROWS_AS(effective_mode_number(1.0), std::domain_error);
  CHECK_THROWS_AS(effective_mode_number(0.5), std::domain_error);
  CHECK_THROWS_AS(effective_mode_number(1.0 + 1e-13), std::domain_error);
}

TEST_CASE("dimension upper bound sums per-resonance mode numbers") {
  std::vector<double> g2(10, 1.0 + 1.0 / 1.039);
  CHECK(dimension_upper_bound(g2) == doctest::Approx(10.39).epsilon(1e-9));
  CHECK(dimension_upper_bound({}) == 0.0);
  CHECK(dimension_upper_bound({2.0, 2.0}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sinusoid fitting") {
  SUBCASE("recovers exact parameters") {
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
      double t = 10.0 * i / 199.0;
      x.push_back(t);
      y.push_back(0.7 + 0.3 * std::cos(1.7 * t + 0.4));
    }
    SinusoidFit f = fit_sinusoid(x, y);
    CHECK(f.amplitude == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(f.angular_frequency == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(f.phase == doctest::Approx(0.4).epsilon(1e-7));
    CHECK(f.offset == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(f.residual_rms < 1e-9);
  }

  SUBCASE("tolerates small perturbations") {
    std::vector<double> x, y;
    for (int i = 0; i < 400; ++i) {
      double t = 25.0 * i / 399.0;
      x.push_back(t);
      // Deterministic ripple well below the signal.
      y.push_back(1.1 + 0.5 * std::cos(0.9 * t - 1.0) + 1e-3 * std::sin(37.1 * t));
    }
    SinusoidFit f = fit_sinusoid(x, y);
    CHECK(f.amplitude == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(f.angular_frequency == doctest::Approx(0.9).epsilon(1e-3));
    CHECK(f.offset == doctest::Approx(1.1).epsilon(2e-3));
  }

  SUBCASE("constant data fits a flat line") {
    std::vector<double> x{0, 1, 2, 3, 4}, y(5, 3.25);
    SinusoidFit f = fit_sinusoid(x, y);
    CHECK(f.amplitude == 0.0);
    CHECK(f.angular_frequency == 0.0);
    CHECK(f.offset == doctest::Approx(3.25).epsilon(1e-12));
    CHECK(f.residual_rms < 1e-12);
  }

  SUBCASE("rejects tiny or mismatched inputs") {
    CHECK_THROWS_AS(fit_sinusoid({0, 1, 2}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(fit_sinusoid({0, 1, 2, 3}, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(fit_sinusoid({3, 2, 1, 0}, {1, 2, 3, 4}), std::invalid_argument);
  }
}
