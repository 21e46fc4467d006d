#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "qfc/comb.hpp"
#include "qfc/state.hpp"

using namespace qfc;
using cd = std::complex<double>;

namespace {

constexpr double kNu0 = speed_of_light_m_s / 1555.68e-9;
constexpr double kFsr = 362e9;

CombSpec uniform_comb(int n) {
  return CombSpec::create(kNu0, kFsr, n, default_linewidth_hz(), uniform_profile(n));
}

ModePair pair_of(Path pa, int ka, Path pb, int kb) {
  return ModePair::make({pa, ka}, {pb, kb});
}

double dist(cd a, cd b) { return std::abs(a - b); }

}  // namespace

TEST_CASE("source state: equal superposition of the two pump directions") {
  CombSpec c = uniform_comb(0);
  TwoPhotonState st = sagnac_source_state(c, 0.0);
  CHECK(st.stage == Stage::PreSplitter);
  CHECK(st.amplitudes.size() == 2);
  const double r = 1.0 / std::numbers::sqrt2;
  CHECK(dist(st.amplitude(pair_of(Path::Cw, 0, Path::Cw, 0)), cd{r, 0}) < 1e-15);
  CHECK(dist(st.amplitude(pair_of(Path::Ccw, 0, Path::Ccw, 0)), cd{r, 0}) < 1e-15);
  CHECK_NOTHROW(st.validate());
}

TEST_CASE("source state: counter-propagating pairs carry twice the pump phase") {
  CombSpec c = uniform_comb(2);
  double phi = 0.7313;
  TwoPhotonState st = sagnac_source_state(c, phi);
  for (int k = 0; k <= 2; ++k) {
    cd cw = st.amplitude(pair_of(Path::Cw, k, Path::Cw, -k));
    cd ccw = st.amplitude(pair_of(Path::Ccw, k, Path::Ccw, -k));
    CHECK(dist(ccw, cw * std::exp(cd{0, 2 * phi})) < 1e-14);
    CHECK(std::abs(std::abs(cw) - std::sqrt(c.pair_weight(k) / 2)) < 1e-14);
  }
}

TEST_CASE("splitter: doubly occupied input fans out 1/4, 1/2, 1/4") {
  TwoPhotonState in;
  in.basis = uniform_comb(0);
  in.stage = Stage::PreSplitter;
  in.set_amplitude(pair_of(Path::Cw, 0, Path::Cw, 0), 1.0);

  TwoPhotonState out = apply_balanced_splitter(in);
  CHECK(out.stage == Stage::PostSplitter);
  cd uu = out.amplitude(pair_of(Path::Upper, 0, Path::Upper, 0));
  cd ul = out.amplitude(pair_of(Path::Upper, 0, Path::Lower, 0));
  cd ll = out.amplitude(pair_of(Path::Lower, 0, Path::Lower, 0));
  CHECK(dist(uu, cd{0.5, 0}) < 1e-15);
  CHECK(dist(ul, cd{1.0 / std::numbers::sqrt2, 0}) < 1e-15);
  CHECK(dist(ll, cd{0.5, 0}) < 1e-15);
  CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));

  // Reversed pump direction flips the sign of the cross term only.
  TwoPhotonState in2;
  in2.basis = in.basis;
  in2.stage = Stage::PreSplitter;
  in2.set_amplitude(pair_of(Path::Ccw, 0, Path::Ccw, 0), 1.0);
  TwoPhotonState out2 = apply_balanced_splitter(in2);
  CHECK(dist(out2.amplitude(pair_of(Path::Upper, 0, Path::Upper, 0)), cd{0.5, 0}) < 1e-15);
  CHECK(dist(out2.amplitude(pair_of(Path::Upper, 0, Path::Lower, 0)),
             cd{-1.0 / std::numbers::sqrt2, 0}) < 1e-15);
  CHECK(dist(out2.amplitude(pair_of(Path::Lower, 0, Path::Lower, 0)), cd{0.5, 0}) < 1e-15);
}

TEST_CASE("splitter: distinct-bin input spreads evenly over the four path pairs") {
  TwoPhotonState in;
  in.basis = uniform_comb(1);
  in.stage = Stage::PreSplitter;
  in.set_amplitude(pair_of(Path::Cw, 1, Path::Cw, -1), 1.0);
  TwoPhotonState out = apply_balanced_splitter(in);
  for (auto [pa, pb] : {std::pair{Path::Upper, Path::Upper},
                        {Path::Upper, Path::Lower},
                        {Path::Lower, Path::Upper},
                        {Path::Lower, Path::Lower}}) {
    CHECK(dist(out.amplitude(pair_of(pa, 1, pb, -1)), cd{0.5, 0}) < 1e-15);
  }
}

TEST_CASE("splitter: unitary on random pre-splitter states") {
  std::mt19937_64 rng(0x51a9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CombSpec c = uniform_comb(3);
  for (int trial = 0; trial < 1000; ++trial) {
    TwoPhotonState st;
    st.basis = c;
    st.stage = Stage::PreSplitter;
    for (int k = 0; k <= 3; ++k) {
      for (auto [pa, pb] : {std::pair{Path::Cw, Path::Cw},
                            {Path::Ccw, Path::Ccw},
                            {Path::Cw, Path::Ccw}}) {
        if (k == 0 && pa != pb && trial % 2) continue;  // vary the support
        st.set_amplitude(pair_of(pa, k, pb, -k), cd{u(rng), u(rng)});
      }
    }
    double scale = 1.0 / std::sqrt(st.norm_squared());
    for (auto& [key, amp] : st.amplitudes) amp *= scale;

    TwoPhotonState out = apply_balanced_splitter(st);
    CHECK(std::abs(out.norm_squared() - 1.0) < 1e-12);
  }
}

TEST_CASE("splitter refuses to run twice") {
  TwoPhotonState out = output_state(uniform_comb(1), 0.3);
  CHECK_THROWS_AS(apply_balanced_splitter(out), std::invalid_argument);
}

TEST_CASE("output state matches the closed form") {
  CombSpec c = uniform_comb(2);
  for (double phi : {0.0, 0.31, std::numbers::pi / 4, 1.9, std::numbers::pi / 2, 4.4}) {
    TwoPhotonState st = output_state(c, phi);
    cd g = std::exp(cd{0, phi});  // global phase
    cd bunch = g * std::cos(phi) / std::numbers::sqrt2;
    cd split = g * cd{0, -1} * std::sin(phi) / std::numbers::sqrt2;

    for (int k = 1; k <= 2; ++k) {
      double w = std::sqrt(c.pair_weight(k));
      CHECK(dist(st.amplitude(pair_of(Path::Upper, k, Path::Upper, -k)), w * bunch) < 1e-12);
      CHECK(dist(st.amplitude(pair_of(Path::Lower, k, Path::Lower, -k)), w * bunch) < 1e-12);
      CHECK(dist(st.amplitude(pair_of(Path::Upper, k, Path::Lower, -k)), w * split) < 1e-12);
      CHECK(dist(st.amplitude(pair_of(Path::Upper, -k, Path::Lower, k)), w * split) < 1e-12);
    }
    double w0 = std::sqrt(c.pair_weight(0));
    CHECK(dist(st.amplitude(pair_of(Path::Upper, 0, Path::Upper, 0)), w0 * bunch) < 1e-12);
    CHECK(dist(st.amplitude(pair_of(Path::Lower, 0, Path::Lower, 0)), w0 * bunch) < 1e-12);
    CHECK(dist(st.amplitude(pair_of(Path::Upper, 0, Path::Lower, 0)),
               w0 * g * cd{0, -1} * std::sin(phi)) < 1e-12);

    // Bunched and split weights partition the norm as cos^2 : sin^2.
    double same = 0.0, cross = 0.0;
    for (const auto& [key, amp] : st.amplitudes) {
      (key.a.path == key.b.path ? same : cross) += std::norm(amp);
    }
    CHECK(same == doctest::Approx(std::cos(phi) * std::cos(phi)).epsilon(1e-12));
    CHECK(cross == doctest::Approx(std::sin(phi) * std::sin(phi)).epsilon(1e-12));
    CHECK_NOTHROW(st.validate());
  }
}

TEST_CASE("phase convention flag shifts the working point by a quarter turn") {
  CombSpec c = uniform_comb(1);

  // Default convention: no cross-path light at phi = 0.
  TwoPhotonState st0 = output_state(c, 0.0);
  for (const auto& [key, amp] : st0.amplitudes) {
    if (key.a.path != key.b.path) CHECK(std::abs(amp) < 1e-14);
  }
  // Literal convention: the same happens at phi = pi/2.
  TwoPhotonState st1 = output_state(c, std::numbers::pi / 2, true);
  for (const auto& [key, amp] : st1.amplitudes) {
    if (key.a.path != key.b.path) CHECK(std::abs(amp) < 1e-12);
  }
  // And the two conventions agree up to the quarter-turn shift.
  TwoPhotonState a = output_state(c, 0.4, true);
  TwoPhotonState b = output_state(c, 0.4 + std::numbers::pi / 2, false);
  REQUIRE(a.amplitudes.size() == b.amplitudes.size());
  for (size_t i = 0; i < a.amplitudes.size(); ++i) {
    CHECK(a.amplitudes[i].first == b.amplitudes[i].first);
    CHECK(dist(a.amplitudes[i].second, b.amplitudes[i].second) < 1e-12);
  }
}

TEST_CASE("state validation rejects inconsistent contents") {
  TwoPhotonState st;
  st.basis = uniform_comb(1);
  st.stage = Stage::PostSplitter;
  st.set_amplitude(pair_of(Path::Upper, 1, Path::Upper, 1), 1.0);  // energy violation
  CHECK_THROWS_AS(st.validate(), std::invalid_argument);

  TwoPhotonState st2;
  st2.basis = uniform_comb(1);
  st2.stage = Stage::PostSplitter;
  st2.set_amplitude(pair_of(Path::Cw, 1, Path::Cw, -1), 1.0);  // stage mismatch
  CHECK_THROWS_AS(st2.validate(), std::invalid_argument);

  TwoPhotonState st3 = output_state(uniform_comb(1), 0.2);
  st3.amplitudes[0].second *= 3.0;  // denormalized
  CHECK_THROWS_AS(st3.validate(), std::invalid_argument);
}

TEST_CASE("spectral filter: heralding probability and renormalization") {
  CombSpec c = uniform_comb(4);
  TwoPhotonState st = output_state(c, 0.0);

  SUBCASE("identity passband changes nothing") {
    std::set<int> all{-4, -3, -2, -1, 0, 1, 2, 3, 4};
    auto [fs, p] = apply_filter(st, Path::Upper, all);
    CHECK(p == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fs.amplitudes.size() == st.amplitudes.size());
  }

  SUBCASE("empty passband keeps only pairs that avoid the filtered arm") {
    // Pairs with no photon on the filtered path never meet the filter; at
    // phi = 0 that is the all-lower half of the norm.
    auto [fs, p] = apply_filter(st, Path::Upper, {});
    CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    for (const auto& [key, amp] : fs.amplitudes) {
      CHECK(key.a.path == Path::Lower);
      CHECK(key.b.path == Path::Lower);
    }
    auto [fs2, p2] = apply_filter(fs, Path::Lower, {});
    CHECK(p2 == 0.0);
    CHECK(fs2.empty());
  }

  SUBCASE("degenerate passband on both arms heralds 1/9") {
    // At phi = 0 each path pair {k,-k} of either output carries 1/9 (k >= 1)
    // or 1/18 (k = 0) of the norm; keeping bin 0 on both arms leaves the two
    // degenerate bunched pairs, 1/18 + 1/18.
    auto [s1, p1] = apply_filter(st, Path::Upper, {0});
    auto [s2, p2] = apply_filter(s1, Path::Lower, {0});
    CHECK(p1 * p2 == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(s2.amplitudes.size() == 2);
    CHECK(s2.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::norm(s2.amplitude(pair_of(Path::Upper, 0, Path::Upper, 0))) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(s2.amplitude(pair_of(Path::Lower, 0, Path::Lower, 0))) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("filter order does not matter") {
    auto [a1, pa1] = apply_filter(st, Path::Upper, {1, -1});
    auto [a2, pa2] = apply_filter(a1, Path::Lower, {-1});
    auto [b1, pb1] = apply_filter(st, Path::Lower, {-1});
    auto [b2, pb2] = apply_filter(b1, Path::Upper, {1, -1});
    CHECK(pa1 * pa2 == doctest::Approx(pb1 * pb2).epsilon(1e-12));
    REQUIRE(a2.amplitudes.size() == b2.amplitudes.size());
    for (size_t i = 0; i < a2.amplitudes.size(); ++i) {
      CHECK(a2.amplitudes[i].first == b2.amplitudes[i].first);
      CHECK(dist(a2.amplitudes[i].second, b2.amplitudes[i].second) < 1e-12);
    }
  }

  SUBCASE("filters only act downstream of the splitter") {
    TwoPhotonState pre = sagnac_source_state(c, 0.0);
    CHECK_THROWS_AS(apply_filter(pre, Path::Upper, {0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_filter(st, Path::Cw, {0}), std::invalid_argument);
  }
}
