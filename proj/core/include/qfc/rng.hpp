#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qfc {

// SplitMix64 with hashed substreams. Every stochastic component draws from
// its own substream keyed by (seed, stream id), so adding or removing one
// noise source never perturbs the draws of another, and results are
// bit-reproducible across platforms (no std::distribution involved).
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static SplitMix64 substream(uint64_t seed, uint64_t stream_id) {
    return SplitMix64(mix(seed + 0x9E3779B97F4A7C15ull * (stream_id + 1)));
  }

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double mean) { return -mean * std::log(uniform_pos()); }

  // Symmetric double-sided exponential with the given scale (mean |x|).
  double laplace(double scale) {
    const double u = uniform() - 0.5;
    const double mag = -scale * std::log(1.0 - 2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
  }

  // Standard normal by Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace qfc
