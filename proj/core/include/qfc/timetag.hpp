#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qfc {

// Detector clicks as integer picosecond timestamps, sorted ascending.
using TagStream = std::vector<int64_t>;

struct StreamPair {
  TagStream signal;
  TagStream idler;
};

// Photon-pair click simulation. Pairs are emitted as a Poisson process; the
// idler tag is offset from its signal partner by a double-sided exponential
// with scale correlation_time_s (the Fourier pair of a Lorentzian line).
// Detection applies per-arm Bernoulli thinning, Gaussian timing jitter, and
// an independent Poisson background of dark counts per arm.
struct StreamConfig {
  double pair_rate_hz = 0.0;
  double correlation_time_s = 0.0;
  double duration_s = 0.0;
  std::array<double, 2> efficiency = {1.0, 1.0};     // signal, idler
  std::array<double, 2> dark_rate_hz = {0.0, 0.0};   // signal, idler
  double jitter_sigma_s = 0.0;
  uint64_t seed = 0;

  void validate() const;
};

StreamPair generate_stream(const StreamConfig& cfg);

// Thermal-light clicks: a Cox process whose intensity is the summed squared
// magnitude of num_modes independent complex Ornstein-Uhlenbeck envelopes
// (exact stationary transitions), normalized to unit mean. One mode gives
// g2(0) = 2, N equal modes give 1 + 1/N, with coherence time
// correlation_time_s (g2(tau) = 1 + |g1|^2, |g1| = exp(-|tau|/(2*tc))).
struct ThermalConfig {
  double mean_rate_hz = 0.0;
  double correlation_time_s = 0.0;
  int num_modes = 1;
  double duration_s = 0.0;
  uint64_t seed = 0;

  void validate() const;
};

TagStream generate_thermal_stream(const ThermalConfig& cfg);

// Cross-correlation histogram of delays t_b - t_a. Bins are half-open
// [center - w/2, center + w/2) with integer-exact edge handling; the count is
// always odd, centered on zero delay, and covers |delay| <= span_ps.
struct CoincidenceHistogram {
  int64_t bin_width_ps = 0;
  int64_t span_ps = 0;
  std::vector<uint64_t> counts;
  uint64_t singles_a = 0;
  uint64_t singles_b = 0;
  double duration_s = 0.0;

  int half_bins() const { return static_cast<int>((counts.size() - 1) / 2); }
  int64_t bin_center_ps(size_t i) const {
    return (static_cast<int64_t>(i) - half_bins()) * bin_width_ps;
  }
};

// Linear-time two-pointer correlator. duration_s = 0 infers the span of the
// data; pass the true acquisition time for calibrated g2 normalization.
CoincidenceHistogram coincidence_histogram(const TagStream& a,
                                           const TagStream& b,
                                           int64_t bin_width_ps,
                                           int64_t span_ps,
                                           double duration_s = 0.0);

// Same result bit for bit, computed over num_chunks time windows (each with a
// halo of one span) that run on separate threads when available.
CoincidenceHistogram coincidence_histogram_chunked(const TagStream& a,
                                                   const TagStream& b,
                                                   int64_t bin_width_ps,
                                                   int64_t span_ps,
                                                   double duration_s,
                                                   int num_chunks);

// counts / (r_a * r_b * w * T): 1 for uncorrelated streams.
std::vector<double> g2_normalized(const CoincidenceHistogram& h);

// Random 50/50 routing of one stream onto two detectors (intensity
// correlations survive the split).
std::pair<TagStream, TagStream> hbt_split(const TagStream& s, uint64_t seed);

// Coincidence-to-accidental ratio in dB from a histogram: total counts within
// |delay| <= peak_half_ps against the same-width expectation estimated from
// bins with |delay| > exclusion_half_ps. Requires at least 10 estimator bins.
// Zero accidentals return +infinity.
double car_from_histogram(const CoincidenceHistogram& h, int64_t peak_half_ps,
                          int64_t exclusion_half_ps);

// Stream files. Binary records are 16 bytes, little endian: a channel byte,
// 7 reserved zero bytes, then a uint64 timestamp in ps. The CSV twin has a
// "channel,timestamp_ps" header.
struct TaggedEvent {
  uint8_t channel = 0;
  uint64_t timestamp_ps = 0;
};

void write_tags_binary(const std::string& path,
                       const std::vector<TaggedEvent>& events);
std::vector<TaggedEvent> read_tags_binary(const std::string& path);
void write_tags_csv(const std::string& path,
                    const std::vector<TaggedEvent>& events);
std::vector<TaggedEvent> read_tags_csv(const std::string& path);

// Interleave two sorted streams as channel 0 / channel 1 events.
std::vector<TaggedEvent> merge_streams(const TagStream& ch0,
                                       const TagStream& ch1);

}  // namespace qfc
