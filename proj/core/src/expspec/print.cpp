#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qfc/expspec.hpp"

namespace qfc::expspec {

std::string format_double(double v) {
  // Shortest decimal that parses back to the same bits.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string int_list(const std::vector<int>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

const char* bool_word(bool b) { return b ? "true" : "false"; }

}  // namespace

// Fully expanded canonical form: every field in base units, so reparsing
// reproduces the spec bit for bit and diffs between specs stay small.
std::string pretty_print(const ExperimentSpec& spec) {
  std::ostringstream os;

  os << "source {\n";
  os << "  frequency = " << format_double(spec.source.degenerate_frequency_hz)
     << " Hz;\n";
  os << "  fsr = " << format_double(spec.source.fsr_hz) << " Hz;\n";
  os << "  pairs = " << spec.source.num_pairs << ";\n";
  os << "  linewidth = " << format_double(spec.source.linewidth_hz)
     << " Hz;\n";
  os << "  profile = ";
  switch (spec.source.profile) {
    case ProfileKind::Uniform:
      os << "uniform";
      break;
    case ProfileKind::PairsOnly:
      os << "pairs_only";
      break;
    case ProfileKind::Decaying:
      os << "decaying";
      break;
    case ProfileKind::Explicit: {
      os << "[";
      for (size_t i = 0; i < spec.source.explicit_profile.size(); ++i) {
        if (i) os << ", ";
        os << format_double(spec.source.explicit_profile[i]);
      }
      os << "]";
      break;
    }
  }
  os << ";\n";
  os << "  decay_ratio = " << format_double(spec.source.decay_ratio) << ";\n";
  os << "}\n";

  os << "phase {\n";
  os << "  value = " << format_double(spec.phase.value_rad) << ";\n";
  os << "  start = " << format_double(spec.phase.start_rad) << ";\n";
  os << "  stop = " << format_double(spec.phase.stop_rad) << ";\n";
  os << "  steps = " << spec.phase.steps << ";\n";
  os << "  eq1_literal = " << bool_word(spec.phase.eq1_literal) << ";\n";
  os << "}\n";

  if (spec.filter.upper || spec.filter.lower) {
    os << "filter {\n";
    if (spec.filter.upper) {
      os << "  upper = " << int_list(*spec.filter.upper) << ";\n";
    }
    if (spec.filter.lower) {
      os << "  lower = " << int_list(*spec.filter.lower) << ";\n";
    }
    os << "}\n";
  }

  os << "noise {\n";
  os << "  accidental = " << format_double(spec.noise.accidental) << ";\n";
  os << "  imbalance = " << format_double(spec.noise.imbalance) << ";\n";
  os << "  jitter = " << format_double(spec.noise.jitter_rad) << ";\n";
  os << "}\n";

  os << "measure {\n";
  os << "  kind = ";
  switch (spec.measure.kind) {
    case MeasureKind::CorrelationMatrix: os << "correlation_matrix"; break;
    case MeasureKind::InterferenceTrace: os << "interference_trace"; break;
    case MeasureKind::MziTrace: os << "mzi_trace"; break;
    case MeasureKind::Schmidt: os << "schmidt"; break;
    case MeasureKind::G2Bounds: os << "g2_bounds"; break;
    case MeasureKind::HomTrace: os << "hom_trace"; break;
    case MeasureKind::TimeTags: os << "timetags"; break;
  }
  os << ";\n";
  os << "  bins = " << int_list(spec.measure.bins) << ";\n";
  os << "  include_degenerate = " << bool_word(spec.measure.include_degenerate)
     << ";\n";
  os << "  neff = " << format_double(spec.measure.neff) << ";\n";
  os << "  delay_start = " << format_double(spec.measure.delay_start_s)
     << " s;\n";
  os << "  delay_stop = " << format_double(spec.measure.delay_stop_s)
     << " s;\n";
  os << "  delay_steps = " << spec.measure.delay_steps << ";\n";
  os << "  scheme = "
     << (spec.measure.scheme == TagScheme::Pairs ? "pairs" : "hbt_thermal")
     << ";\n";
  os << "  rate = " << format_double(spec.measure.rate_hz) << " Hz;\n";
  os << "  duration = " << format_double(spec.measure.duration_s) << " s;\n";
  os << "  correlation_time = "
     << format_double(spec.measure.correlation_time_s) << " s;\n";
  os << "  bin_width = " << format_double(spec.measure.bin_width_s) << " s;\n";
  os << "  span = " << format_double(spec.measure.span_s) << " s;\n";
  os << "  efficiency_signal = "
     << format_double(spec.measure.efficiency_signal) << ";\n";
  os << "  efficiency_idler = " << format_double(spec.measure.efficiency_idler)
     << ";\n";
  os << "  dark_rate_signal = "
     << format_double(spec.measure.dark_rate_signal_hz) << " Hz;\n";
  os << "  dark_rate_idler = "
     << format_double(spec.measure.dark_rate_idler_hz) << " Hz;\n";
  os << "  time_jitter = " << format_double(spec.measure.time_jitter_s)
     << " s;\n";
  os << "  modes = " << int_list(spec.measure.modes) << ";\n";
  os << "  seed = " << spec.measure.seed << ";\n";
  os << "}\n";

  os << "output {\n";
  os << "  path = " << quote(spec.output.path) << ";\n";
  os << "  format = "
     << (spec.output.format == OutputSpec::Format::Csv ? "csv" : "json")
     << ";\n";
  if (!spec.output.stream_prefix.empty()) {
    os << "  streams = " << quote(spec.output.stream_prefix) << ";\n";
  }
  os << "  stream_format = "
     << (spec.output.stream_format == OutputSpec::StreamFormat::Binary
             ? "binary"
             : "csv")
     << ";\n";
  os << "}\n";

  return os.str();
}

}  // namespace qfc::expspec
