#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qfc/comb.hpp"
#include "qfc/measurement.hpp"

// Textual experiment descriptions. A file is a list of blocks
//
//   source  { fsr = 362 GHz; pairs = 10; profile = uniform; }
//   phase   { start = 0 rad; stop = 12.566 rad; steps = 401; }
//   noise   { accidental = 0.032; }
//   measure { kind = interference_trace; bins = [1]; }
//   output  { path = "trace.csv"; format = csv; }
//
// with '#' comments, number literals carrying an optional unit word
// (GHz MHz Hz nm ps ns s dB deg rad), quoted strings, bare identifiers, and
// [a, b, c] lists. A preset block ("preset { name = fig3b; }") seeds the
// experiment from a built-in definition; any other block then overrides
// individual keys. Parsing never half-succeeds: either a spec comes back, or
// only diagnostics do.
namespace qfc::expspec {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string code;  // stable slug: "unit-mismatch", "unknown-key", ...
  std::string message;
};

struct SourceLoc {
  int line = 0;
  int column = 0;
};

inline constexpr double kDefaultWavelengthM = 1555.68e-9;
inline constexpr double kDefaultFsrHz = 362e9;

enum class ProfileKind { Uniform, PairsOnly, Decaying, Explicit };

struct SourceSpec {
  double degenerate_frequency_hz =
      speed_of_light_m_s / kDefaultWavelengthM;
  double fsr_hz = kDefaultFsrHz;
  int num_pairs = 5;
  double linewidth_hz = default_linewidth_hz();
  ProfileKind profile = ProfileKind::Uniform;
  double decay_ratio = 0.95;
  std::vector<double> explicit_profile;  // pair weights p_0..p_N

  CombSpec to_comb() const;  // throws std::invalid_argument
  bool operator==(const SourceSpec&) const = default;
};

struct PhaseSpec {
  double value_rad = 0.0;  // fixed-phase measurements
  double start_rad = 0.0;  // swept measurements use start/stop/steps
  double stop_rad = 0.0;
  int steps = 0;  // 0 means no sweep
  bool eq1_literal = false;

  bool sweep() const { return steps >= 2; }
  bool operator==(const PhaseSpec&) const = default;
};

struct FilterSpec {
  std::optional<std::vector<int>> upper;  // pass bins, sorted
  std::optional<std::vector<int>> lower;

  bool operator==(const FilterSpec&) const = default;
};

struct NoiseSpec {
  double accidental = 0.0;
  double imbalance = 1.0;
  double jitter_rad = 0.0;

  NoiseModel to_model() const;
  bool operator==(const NoiseSpec&) const = default;
};

enum class MeasureKind {
  CorrelationMatrix,
  InterferenceTrace,
  MziTrace,
  Schmidt,
  G2Bounds,
  HomTrace,
  TimeTags,
};

enum class TagScheme { Pairs, HbtThermal };

// One struct covers every measurement kind; keys that do not apply to the
// selected kind are carried along and ignored by run(), which keeps the
// canonical form independent of key order and preset history.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::CorrelationMatrix;

  std::vector<int> bins = {1};      // interference_trace: aggregated pairs
  bool include_degenerate = false;  // schmidt / g2_bounds folding
  double neff = 1.0;                // g2_bounds: per-resonance mode number

  double delay_start_s = -4e-9;  // hom_trace grid
  double delay_stop_s = 4e-9;
  int delay_steps = 401;

  TagScheme scheme = TagScheme::Pairs;  // timetags
  double rate_hz = 1e5;
  double duration_s = 1.0;
  double correlation_time_s = 0.0;  // 0: derived from the source linewidth
  double bin_width_s = 1e-10;
  double span_s = 1e-8;
  double efficiency_signal = 1.0;
  double efficiency_idler = 1.0;
  double dark_rate_signal_hz = 0.0;
  double dark_rate_idler_hz = 0.0;
  double time_jitter_s = 0.0;
  std::vector<int> modes = {1};  // hbt_thermal: mode counts to scan
  uint64_t seed = 1;

  bool operator==(const MeasureSpec&) const = default;
};

struct OutputSpec {
  enum class Format { Csv, Json };
  enum class StreamFormat { Binary, Csv };

  std::string path = "-";  // "-" writes to stdout
  Format format = Format::Csv;
  std::string stream_prefix;  // when set, timetags runs dump raw streams
  StreamFormat stream_format = StreamFormat::Binary;

  bool operator==(const OutputSpec&) const = default;
};

struct BlockLocs {
  SourceLoc source, phase, filter, noise, measure, output;
};

struct ExperimentSpec {
  SourceSpec source;
  PhaseSpec phase;
  FilterSpec filter;
  NoiseSpec noise;
  MeasureSpec measure;
  OutputSpec output;

  std::string preset_name;  // informational; not part of equality
  BlockLocs locs;           // diagnostics bookkeeping; not part of equality

  bool operator==(const ExperimentSpec& o) const {
    return source == o.source && phase == o.phase && filter == o.filter &&
           noise == o.noise && measure == o.measure && output == o.output;
  }
};

struct ParseResult {
  std::optional<ExperimentSpec> spec;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return spec.has_value(); }
};

ParseResult parse(std::string_view text);

// Canonical, fully expanded text: every field spelled out in base units, so
// parse(pretty_print(s)) reproduces s exactly.
std::string pretty_print(const ExperimentSpec& spec);

// Shortest exact decimal form of a double (%.17g trimmed); shared by the
// canonical printer and the CSV emitter.
std::string format_double(double v);

const std::vector<std::string>& preset_names();
std::optional<ExperimentSpec> preset(const std::string& name);
std::string preset_description(const std::string& name);

struct RunError : std::runtime_error {
  RunError(const std::string& msg, SourceLoc where)
      : std::runtime_error(msg), loc(where) {}
  SourceLoc loc;
};

struct ResultTable {
  using Cell = std::variant<int64_t, double, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Executes the experiment and returns the long-form result table. Raw tag
// streams are written as a side effect when output.stream_prefix is set.
// Failures surface as RunError carrying the originating block position.
ResultTable run(const ExperimentSpec& spec);

void emit_csv(const ResultTable& table, std::ostream& os);
void emit_json(const ResultTable& table, std::ostream& os);

}  // namespace qfc::expspec
