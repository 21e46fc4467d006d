#include "qfc/timetag.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qfc/rng.hpp"

namespace qfc {
namespace {

// Substream ids; every stochastic ingredient owns one, so switching any
// single ingredient on or off cannot reshuffle the others.
enum StreamId : uint64_t {
  kPairEmission = 0,
  kIdlerOffset = 1,
  kThinSignal = 2,
  kThinIdler = 3,
  kJitterSignal = 4,
  kJitterIdler = 5,
  kDarkSignal = 6,
  kDarkIdler = 7,
  kThermalCandidates = 8,
  kThermalAccept = 9,
  kHbtRouting = 12,
  kThermalModeBase = 16,
};

int64_t to_ps(double seconds) {
  return static_cast<int64_t>(std::llround(seconds * 1e12));
}

void append_darks(TagStream& out, double rate_hz, double duration_s,
                  uint64_t seed, uint64_t stream_id) {
  if (rate_hz <= 0.0) return;
  SplitMix64 rng = SplitMix64::substream(seed, stream_id);
  double t = rng.exponential(1.0 / rate_hz);
  while (t < duration_s) {
    out.push_back(to_ps(t));
    t += rng.exponential(1.0 / rate_hz);
  }
}

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  const int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

void check_sorted(const TagStream& s, const char* name) {
  if (!std::is_sorted(s.begin(), s.end())) {
    throw std::invalid_argument(std::string(name) +
                                " stream is not time sorted");
  }
}

struct HistogramShape {
  int64_t w = 0;
  int64_t m = 0;        // bins per side
  int64_t two_limit = 0;  // window on 2*delta: [-two_limit, two_limit)
};

HistogramShape histogram_shape(int64_t bin_width_ps, int64_t span_ps) {
  if (bin_width_ps <= 0) {
    throw std::invalid_argument("bin width must be positive");
  }
  if (span_ps < 0) {
    throw std::invalid_argument("span must be nonnegative");
  }
  HistogramShape shape;
  shape.w = bin_width_ps;
  shape.m = (span_ps + bin_width_ps - 1) / bin_width_ps;
  shape.two_limit = (2 * shape.m + 1) * bin_width_ps;
  return shape;
}

// Correlate a-tags with indices [a_lo, a_hi) against the whole of b,
// accumulating into counts. The two b-pointers only move forward, so the
// total work is linear in tags plus accepted pairs.
void correlate_range(const TagStream& a, const TagStream& b,
                     const HistogramShape& shape, size_t a_lo, size_t a_hi,
                     std::vector<uint64_t>& counts) {
  size_t lo = 0, hi = 0;
  for (size_t i = a_lo; i < a_hi; ++i) {
    const int64_t t = a[i];
    while (lo < b.size() && 2 * (b[lo] - t) < -shape.two_limit) ++lo;
    if (hi < lo) hi = lo;
    while (hi < b.size() && 2 * (b[hi] - t) < shape.two_limit) ++hi;
    for (size_t j = lo; j < hi; ++j) {
      const int64_t idx = floor_div(2 * (b[j] - t) + shape.w, 2 * shape.w);
      counts[static_cast<size_t>(idx + shape.m)]++;
    }
  }
}

double infer_duration_s(const TagStream& a, const TagStream& b) {
  int64_t lo = INT64_MAX, hi = INT64_MIN;
  if (!a.empty()) {
    lo = std::min(lo, a.front());
    hi = std::max(hi, a.back());
  }
  if (!b.empty()) {
    lo = std::min(lo, b.front());
    hi = std::max(hi, b.back());
  }
  if (hi < lo) return 0.0;
  return static_cast<double>(hi - lo + 1) * 1e-12;
}

void put_u64_le(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

}  // namespace

void StreamConfig::validate() const {
  if (!(pair_rate_hz >= 0.0)) {
    throw std::invalid_argument("pair rate must be >= 0");
  }
  if (!(correlation_time_s > 0.0)) {
    throw std::invalid_argument("correlation time must be positive");
  }
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("duration must be positive");
  }
  for (double e : efficiency) {
    if (!(e >= 0.0) || e > 1.0) {
      throw std::invalid_argument("efficiency must lie in [0, 1]");
    }
  }
  for (double d : dark_rate_hz) {
    if (!(d >= 0.0)) {
      throw std::invalid_argument("dark rate must be >= 0");
    }
  }
  if (!(jitter_sigma_s >= 0.0)) {
    throw std::invalid_argument("jitter sigma must be >= 0");
  }
}

StreamPair generate_stream(const StreamConfig& cfg) {
  cfg.validate();
  SplitMix64 emission = SplitMix64::substream(cfg.seed, kPairEmission);
  SplitMix64 offsets = SplitMix64::substream(cfg.seed, kIdlerOffset);
  SplitMix64 thin_s = SplitMix64::substream(cfg.seed, kThinSignal);
  SplitMix64 thin_i = SplitMix64::substream(cfg.seed, kThinIdler);
  SplitMix64 jit_s = SplitMix64::substream(cfg.seed, kJitterSignal);
  SplitMix64 jit_i = SplitMix64::substream(cfg.seed, kJitterIdler);

  StreamPair out;
  if (cfg.pair_rate_hz > 0.0) {
    const double mean_gap = 1.0 / cfg.pair_rate_hz;
    const size_t expect =
        static_cast<size_t>(cfg.pair_rate_hz * cfg.duration_s * 1.1) + 16;
    out.signal.reserve(expect);
    out.idler.reserve(expect);
    double t = emission.exponential(mean_gap);
    while (t < cfg.duration_s) {
      // Draw the full per-pair tuple unconditionally so each substream's
      // consumption depends only on the emission process.
      const double offset = offsets.laplace(cfg.correlation_time_s);
      const bool keep_s = thin_s.bernoulli(cfg.efficiency[0]);
      const bool keep_i = thin_i.bernoulli(cfg.efficiency[1]);
      const double js =
          cfg.jitter_sigma_s > 0.0 ? jit_s.normal() * cfg.jitter_sigma_s : 0.0;
      const double ji =
          cfg.jitter_sigma_s > 0.0 ? jit_i.normal() * cfg.jitter_sigma_s : 0.0;
      if (keep_s) {
        const double ts = t + js;
        if (ts >= 0.0 && ts < cfg.duration_s) out.signal.push_back(to_ps(ts));
      }
      if (keep_i) {
        const double ti = t + offset + ji;
        if (ti >= 0.0 && ti < cfg.duration_s) out.idler.push_back(to_ps(ti));
      }
      t += emission.exponential(mean_gap);
    }
  }
  append_darks(out.signal, cfg.dark_rate_hz[0], cfg.duration_s, cfg.seed,
               kDarkSignal);
  append_darks(out.idler, cfg.dark_rate_hz[1], cfg.duration_s, cfg.seed,
               kDarkIdler);
  std::sort(out.signal.begin(), out.signal.end());
  std::sort(out.idler.begin(), out.idler.end());
  return out;
}

void ThermalConfig::validate() const {
  if (!(mean_rate_hz > 0.0)) {
    throw std::invalid_argument("mean rate must be positive");
  }
  if (!(correlation_time_s > 0.0)) {
    throw std::invalid_argument("correlation time must be positive");
  }
  if (num_modes < 1) {
    throw std::invalid_argument("need at least one mode");
  }
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("duration must be positive");
  }
}

TagStream generate_thermal_stream(const ThermalConfig& cfg) {
  cfg.validate();
  // Thinning envelope: candidates arrive at envelope*mean_rate and are kept
  // with probability I/envelope. P(I > 12) is ~6e-6 for one mode and smaller
  // for several, so clipping bias is <1e-4 even at the strongest bunching.
  constexpr double kEnvelope = 12.0;
  SplitMix64 cand = SplitMix64::substream(cfg.seed, kThermalCandidates);
  SplitMix64 accept = SplitMix64::substream(cfg.seed, kThermalAccept);
  std::vector<SplitMix64> mode_rng;
  mode_rng.reserve(cfg.num_modes);
  std::vector<std::complex<double>> env(cfg.num_modes);
  for (int j = 0; j < cfg.num_modes; ++j) {
    mode_rng.push_back(
        SplitMix64::substream(cfg.seed, kThermalModeBase + j));
    env[j] = {mode_rng[j].normal(), mode_rng[j].normal()};
  }
  const double cand_gap = 1.0 / (kEnvelope * cfg.mean_rate_hz);
  const double inv_norm = 1.0 / (2.0 * cfg.num_modes);
  TagStream out;
  out.reserve(static_cast<size_t>(cfg.mean_rate_hz * cfg.duration_s * 1.1) +
              16);
  double t = cand.exponential(cand_gap);
  double t_prev = 0.0;
  while (t < cfg.duration_s) {
    const double rho = std::exp(-(t - t_prev) / (2.0 * cfg.correlation_time_s));
    const double diff = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    double intensity = 0.0;
    for (int j = 0; j < cfg.num_modes; ++j) {
      env[j] = rho * env[j] +
               diff * std::complex<double>(mode_rng[j].normal(),
                                           mode_rng[j].normal());
      intensity += std::norm(env[j]);
    }
    intensity *= inv_norm;  // unit mean
    if (accept.uniform() < intensity / kEnvelope) {
      out.push_back(to_ps(t));
    }
    t_prev = t;
    t += cand.exponential(cand_gap);
  }
  return out;
}

CoincidenceHistogram coincidence_histogram(const TagStream& a,
                                           const TagStream& b,
                                           int64_t bin_width_ps,
                                           int64_t span_ps,
                                           double duration_s) {
  check_sorted(a, "a");
  check_sorted(b, "b");
  const HistogramShape shape = histogram_shape(bin_width_ps, span_ps);
  CoincidenceHistogram h;
  h.bin_width_ps = bin_width_ps;
  h.span_ps = span_ps;
  h.counts.assign(static_cast<size_t>(2 * shape.m + 1), 0);
  h.singles_a = a.size();
  h.singles_b = b.size();
  h.duration_s = duration_s > 0.0 ? duration_s : infer_duration_s(a, b);
  correlate_range(a, b, shape, 0, a.size(), h.counts);
  return h;
}

CoincidenceHistogram coincidence_histogram_chunked(const TagStream& a,
                                                   const TagStream& b,
                                                   int64_t bin_width_ps,
                                                   int64_t span_ps,
                                                   double duration_s,
                                                   int num_chunks) {
  if (num_chunks < 1 || num_chunks > 256) {
    throw std::invalid_argument("chunk count must lie in [1, 256]");
  }
  check_sorted(a, "a");
  check_sorted(b, "b");
  const HistogramShape shape = histogram_shape(bin_width_ps, span_ps);
  CoincidenceHistogram h;
  h.bin_width_ps = bin_width_ps;
  h.span_ps = span_ps;
  h.counts.assign(static_cast<size_t>(2 * shape.m + 1), 0);
  h.singles_a = a.size();
  h.singles_b = b.size();
  h.duration_s = duration_s > 0.0 ? duration_s : infer_duration_s(a, b);
  if (a.empty()) return h;

  // Chunks own disjoint index ranges of a, split at time boundaries; each
  // works against the shared b stream, so per-pair decisions are identical to
  // the serial pass and the merged counts match bit for bit.
  const int64_t t0 = a.front();
  const int64_t t1 = a.back();
  const int64_t width = (t1 - t0) / num_chunks + 1;
  std::vector<size_t> cut(static_cast<size_t>(num_chunks) + 1, 0);
  cut[static_cast<size_t>(num_chunks)] = a.size();
  for (int c = 1; c < num_chunks; ++c) {
    const int64_t edge = t0 + width * c;
    cut[static_cast<size_t>(c)] = static_cast<size_t>(
        std::lower_bound(a.begin(), a.end(), edge) - a.begin());
  }
  std::vector<std::vector<uint64_t>> partial(
      static_cast<size_t>(num_chunks),
      std::vector<uint64_t>(h.counts.size(), 0));
  auto work = [&](int c) {
    correlate_range(a, b, shape, cut[static_cast<size_t>(c)],
                    cut[static_cast<size_t>(c) + 1],
                    partial[static_cast<size_t>(c)]);
  };
  if (num_chunks == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(num_chunks));
    for (int c = 0; c < num_chunks; ++c) pool.emplace_back(work, c);
    for (auto& th : pool) th.join();
  }
  for (const auto& p : partial) {
    for (size_t i = 0; i < h.counts.size(); ++i) h.counts[i] += p[i];
  }
  return h;
}

std::vector<double> g2_normalized(const CoincidenceHistogram& h) {
  if (h.singles_a == 0 || h.singles_b == 0) {
    throw std::invalid_argument("empty stream has no g2 normalization");
  }
  if (!(h.duration_s > 0.0)) {
    throw std::invalid_argument("histogram duration unknown");
  }
  const double w_s = static_cast<double>(h.bin_width_ps) * 1e-12;
  const double denom = static_cast<double>(h.singles_a) *
                       static_cast<double>(h.singles_b) * w_s / h.duration_s;
  std::vector<double> g2;
  g2.reserve(h.counts.size());
  for (uint64_t c : h.counts) {
    g2.push_back(static_cast<double>(c) / denom);
  }
  return g2;
}

std::pair<TagStream, TagStream> hbt_split(const TagStream& s, uint64_t seed) {
  SplitMix64 rng = SplitMix64::substream(seed, kHbtRouting);
  std::pair<TagStream, TagStream> out;
  out.first.reserve(s.size() / 2 + 8);
  out.second.reserve(s.size() / 2 + 8);
  for (int64_t t : s) {
    (rng.bernoulli(0.5) ? out.first : out.second).push_back(t);
  }
  return out;
}

double car_from_histogram(const CoincidenceHistogram& h, int64_t peak_half_ps,
                          int64_t exclusion_half_ps) {
  if (peak_half_ps < 0 || exclusion_half_ps < peak_half_ps) {
    throw std::invalid_argument("exclusion window must contain the peak");
  }
  uint64_t peak = 0, off = 0;
  int64_t n_peak = 0, n_off = 0;
  for (size_t i = 0; i < h.counts.size(); ++i) {
    const int64_t c = h.bin_center_ps(i);
    if (std::llabs(c) <= peak_half_ps) {
      peak += h.counts[i];
      ++n_peak;
    } else if (std::llabs(c) > exclusion_half_ps) {
      off += h.counts[i];
      ++n_off;
    }
  }
  if (n_peak == 0) {
    throw std::invalid_argument("no bins inside the peak window");
  }
  if (n_off < 10) {
    throw std::invalid_argument(
        "need at least 10 off-peak bins to estimate accidentals");
  }
  const double accidental = static_cast<double>(off) *
                            static_cast<double>(n_peak) /
                            static_cast<double>(n_off);
  if (accidental == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(static_cast<double>(peak) / accidental);
}

void write_tags_binary(const std::string& path,
                       const std::vector<TaggedEvent>& events) {
  std::string buf;
  buf.reserve(events.size() * 16);
  for (const TaggedEvent& e : events) {
    buf.push_back(static_cast<char>(e.channel));
    buf.append(7, '\0');
    put_u64_le(buf, e.timestamp_ps);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) {
    throw std::runtime_error("short write to " + path);
  }
}

std::vector<TaggedEvent> read_tags_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open " + path);
  }
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (buf.size() % 16 != 0) {
    throw std::runtime_error(path + ": truncated 16-byte record");
  }
  std::vector<TaggedEvent> events;
  events.reserve(buf.size() / 16);
  for (size_t i = 0; i < buf.size(); i += 16) {
    TaggedEvent e;
    e.channel = static_cast<uint8_t>(buf[i]);
    uint64_t v = 0;
    for (int k = 0; k < 8; ++k) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(buf[i + 8 + k]))
           << (8 * k);
    }
    e.timestamp_ps = v;
    events.push_back(e);
  }
  return events;
}

void write_tags_csv(const std::string& path,
                    const std::vector<TaggedEvent>& events) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  f << "channel,timestamp_ps\n";
  for (const TaggedEvent& e : events) {
    f << static_cast<unsigned>(e.channel) << ',' << e.timestamp_ps << '\n';
  }
  if (!f) {
    throw std::runtime_error("short write to " + path);
  }
}

std::vector<TaggedEvent> read_tags_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::runtime_error("cannot open " + path);
  }
  std::string line;
  if (!std::getline(f, line) || line != "channel,timestamp_ps") {
    throw std::runtime_error(path + ": missing stream header");
  }
  std::vector<TaggedEvent> events;
  size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected channel,timestamp_ps");
    }
    try {
      TaggedEvent e;
      e.channel = static_cast<uint8_t>(std::stoul(line.substr(0, comma)));
      e.timestamp_ps = std::stoull(line.substr(comma + 1));
      events.push_back(e);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed record");
    }
  }
  return events;
}

std::vector<TaggedEvent> merge_streams(const TagStream& ch0,
                                       const TagStream& ch1) {
  std::vector<TaggedEvent> events;
  events.reserve(ch0.size() + ch1.size());
  size_t i = 0, j = 0;
  auto push = [&events](uint8_t ch, int64_t t) {
    if (t < 0) {
      throw std::invalid_argument("negative timestamp in stream file");
    }
    events.push_back({ch, static_cast<uint64_t>(t)});
  };
  while (i < ch0.size() || j < ch1.size()) {
    if (j >= ch1.size() || (i < ch0.size() && ch0[i] <= ch1[j])) {
      push(0, ch0[i++]);
    } else {
      push(1, ch1[j++]);
    }
  }
  return events;
}

}  // namespace qfc
