#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>

#include "ast.hpp"

namespace qfc::expspec {
namespace detail {
namespace {

struct Cursor {
  const std::vector<Token>& toks;
  size_t i = 0;

  const Token& peek() const { return toks[i]; }
  const Token& get() { return toks[std::min(i++, toks.size() - 1)]; }
  bool at(TokenKind k) const { return toks[i].kind == k; }
  bool done() const { return toks[i].kind == TokenKind::End; }
};

SourceLoc loc_of(const Token& t) { return {t.line, t.column}; }

void syntax_error(std::vector<Diagnostic>& diags, const Token& t,
                  const std::string& msg) {
  diags.push_back({Severity::Error, t.line, t.column, "syntax", msg});
}

// Skips to the next statement boundary: past the next ';', or up to (not
// past) a closing brace.
void recover_stmt(Cursor& cur) {
  while (!cur.done()) {
    if (cur.at(TokenKind::Semicolon)) {
      cur.get();
      return;
    }
    if (cur.at(TokenKind::RBrace)) return;
    cur.get();
  }
}

bool parse_scalar(Cursor& cur, std::vector<Diagnostic>& diags, Value& out) {
  const Token& t = cur.peek();
  out.loc = loc_of(t);
  switch (t.kind) {
    case TokenKind::Number: {
      cur.get();
      out.kind = Value::Kind::Number;
      out.number = t.number;
      if (cur.at(TokenKind::Ident)) {
        out.unit = cur.get().text;
      }
      return true;
    }
    case TokenKind::String: {
      cur.get();
      out.kind = Value::Kind::String;
      out.text = t.text;
      return true;
    }
    case TokenKind::Ident: {
      cur.get();
      out.kind = Value::Kind::Ident;
      out.text = t.text;
      return true;
    }
    default:
      syntax_error(diags, t, "expected a value");
      return false;
  }
}

bool parse_value(Cursor& cur, std::vector<Diagnostic>& diags, Value& out) {
  if (cur.at(TokenKind::LBracket)) {
    const Token& open = cur.get();
    out.kind = Value::Kind::List;
    out.loc = loc_of(open);
    if (cur.at(TokenKind::RBracket)) {
      cur.get();
      return true;
    }
    while (true) {
      Value item;
      if (!parse_scalar(cur, diags, item)) return false;
      out.items.push_back(std::move(item));
      if (cur.at(TokenKind::Comma)) {
        cur.get();
        continue;
      }
      if (cur.at(TokenKind::RBracket)) {
        cur.get();
        return true;
      }
      syntax_error(diags, cur.peek(), "expected ',' or ']' in list");
      return false;
    }
  }
  return parse_scalar(cur, diags, out);
}

}  // namespace

std::vector<Block> parse_blocks(const std::vector<Token>& tokens,
                                std::vector<Diagnostic>& diags) {
  std::vector<Block> blocks;
  Cursor cur{tokens};
  while (!cur.done()) {
    if (!cur.at(TokenKind::Ident)) {
      syntax_error(diags, cur.peek(), "expected a block name");
      cur.get();
      continue;
    }
    Block block;
    const Token& name = cur.get();
    block.name = name.text;
    block.loc = loc_of(name);
    if (!cur.at(TokenKind::LBrace)) {
      syntax_error(diags, cur.peek(),
                   "expected '{' after block name '" + block.name + "'");
      recover_stmt(cur);
      continue;
    }
    cur.get();
    while (!cur.at(TokenKind::RBrace)) {
      if (cur.done()) {
        syntax_error(diags, cur.peek(),
                     "unterminated block '" + block.name + "'");
        break;
      }
      if (!cur.at(TokenKind::Ident)) {
        syntax_error(diags, cur.peek(), "expected a key name");
        recover_stmt(cur);
        continue;
      }
      Stmt stmt;
      const Token& key = cur.get();
      stmt.key = key.text;
      stmt.loc = loc_of(key);
      if (!cur.at(TokenKind::Equals)) {
        syntax_error(diags, cur.peek(), "expected '=' after '" + stmt.key + "'");
        recover_stmt(cur);
        continue;
      }
      cur.get();
      if (!parse_value(cur, diags, stmt.value)) {
        recover_stmt(cur);
        continue;
      }
      if (!cur.at(TokenKind::Semicolon)) {
        syntax_error(diags, cur.peek(), "expected ';' after the value");
        recover_stmt(cur);
        continue;
      }
      cur.get();
      block.stmts.push_back(std::move(stmt));
    }
    if (cur.at(TokenKind::RBrace)) cur.get();
    blocks.push_back(std::move(block));
  }
  return blocks;
}

}  // namespace detail

namespace {

using detail::Block;
using detail::Stmt;
using detail::Value;

enum class Dim { None, Frequency, Length, Time, Angle };

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::None: return "a dimensionless value";
    case Dim::Frequency: return "a frequency";
    case Dim::Length: return "a length";
    case Dim::Time: return "a time";
    case Dim::Angle: return "an angle";
  }
  return "?";
}

struct UnitInfo {
  Dim dim;
  double scale;
};

const UnitInfo* unit_info(const std::string& u) {
  static const std::map<std::string, UnitInfo> table = {
      {"GHz", {Dim::Frequency, 1e9}}, {"MHz", {Dim::Frequency, 1e6}},
      {"Hz", {Dim::Frequency, 1.0}},  {"nm", {Dim::Length, 1e-9}},
      {"ps", {Dim::Time, 1e-12}},     {"ns", {Dim::Time, 1e-9}},
      {"s", {Dim::Time, 1.0}},        {"deg", {Dim::Angle, std::numbers::pi / 180.0}},
      {"rad", {Dim::Angle, 1.0}},
  };
  auto it = table.find(u);
  return it == table.end() ? nullptr : &it->second;
}

struct Sem {
  std::vector<Diagnostic>& diags;
  bool failed = false;

  void error(SourceLoc loc, const char* code, const std::string& msg) {
    diags.push_back({Severity::Error, loc.line, loc.column, code, msg});
    failed = true;
  }
};

// Numeric value in base SI units for the wanted dimension. Bare numbers are
// taken as already being in base units; "dB" converts to a linear power
// ratio for dimensionless keys.
std::optional<double> number_as(Sem& sem, const Stmt& s, Dim want) {
  const Value& v = s.value;
  if (v.kind != Value::Kind::Number) {
    sem.error(v.loc, "type-mismatch",
              "'" + s.key + "' expects " + dim_name(want));
    return std::nullopt;
  }
  if (v.unit.empty()) return v.number;
  if (v.unit == "dB") {
    if (want == Dim::None) return std::pow(10.0, v.number / 10.0);
    sem.error(v.loc, "unit-mismatch",
              "'dB' only applies to dimensionless ratios; '" + s.key +
                  "' expects " + dim_name(want));
    return std::nullopt;
  }
  const UnitInfo* info = unit_info(v.unit);
  if (!info) {
    sem.error(v.loc, "unit-mismatch", "unknown unit '" + v.unit + "'");
    return std::nullopt;
  }
  if (info->dim != want) {
    sem.error(v.loc, "unit-mismatch",
              "'" + v.unit + "' is " + dim_name(info->dim) + " unit; '" +
                  s.key + "' expects " + dim_name(want));
    return std::nullopt;
  }
  return v.number * info->scale;
}

std::optional<int64_t> int_as(Sem& sem, const Stmt& s) {
  const Value& v = s.value;
  if (v.kind != Value::Kind::Number || !v.unit.empty()) {
    if (v.kind == Value::Kind::Number && !v.unit.empty()) {
      sem.error(v.loc, "unit-mismatch",
                "'" + s.key + "' is a bare integer; found unit '" + v.unit +
                    "'");
    } else {
      sem.error(v.loc, "type-mismatch", "'" + s.key + "' expects an integer");
    }
    return std::nullopt;
  }
  const double r = std::round(v.number);
  if (std::abs(v.number - r) > 1e-9 * std::max(1.0, std::abs(v.number)) ||
      std::abs(r) > 9.007199254740992e15) {
    sem.error(v.loc, "type-mismatch",
              "'" + s.key + "' expects an integer, got " +
                  format_double(v.number));
    return std::nullopt;
  }
  return static_cast<int64_t>(r);
}

std::optional<bool> bool_as(Sem& sem, const Stmt& s) {
  if (s.value.kind == Value::Kind::Ident) {
    if (s.value.text == "true") return true;
    if (s.value.text == "false") return false;
  }
  sem.error(s.value.loc, "type-mismatch",
            "'" + s.key + "' expects true or false");
  return std::nullopt;
}

std::optional<std::string> string_as(Sem& sem, const Stmt& s) {
  if (s.value.kind == Value::Kind::String) return s.value.text;
  sem.error(s.value.loc, "type-mismatch",
            "'" + s.key + "' expects a quoted string");
  return std::nullopt;
}

std::optional<std::string> ident_as(Sem& sem, const Stmt& s) {
  if (s.value.kind == Value::Kind::Ident) return s.value.text;
  if (s.value.kind == Value::Kind::String) return s.value.text;
  sem.error(s.value.loc, "type-mismatch",
            "'" + s.key + "' expects an identifier");
  return std::nullopt;
}

std::optional<std::vector<int>> int_list_as(Sem& sem, const Stmt& s) {
  if (s.value.kind != Value::Kind::List) {
    sem.error(s.value.loc, "type-mismatch",
              "'" + s.key + "' expects a list like [1, 2, 3]");
    return std::nullopt;
  }
  std::vector<int> out;
  for (const Value& item : s.value.items) {
    if (item.kind != Value::Kind::Number || !item.unit.empty() ||
        item.number != std::round(item.number) ||
        std::abs(item.number) > 1e9) {
      sem.error(item.loc, "type-mismatch",
                "'" + s.key + "' entries must be bare integers");
      return std::nullopt;
    }
    out.push_back(static_cast<int>(item.number));
  }
  return out;
}

std::optional<std::vector<double>> number_list_as(Sem& sem, const Stmt& s) {
  if (s.value.kind != Value::Kind::List) {
    sem.error(s.value.loc, "type-mismatch",
              "'" + s.key + "' expects a list of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  for (const Value& item : s.value.items) {
    if (item.kind != Value::Kind::Number || !item.unit.empty()) {
      sem.error(item.loc, "type-mismatch",
                "'" + s.key + "' entries must be bare numbers");
      return std::nullopt;
    }
    out.push_back(item.number);
  }
  return out;
}

void unknown_key(Sem& sem, const Block& b, const Stmt& s) {
  sem.error(s.loc, "unknown-key",
            "unknown key '" + s.key + "' in block '" + b.name + "'");
}

bool check_range(Sem& sem, const Stmt& s, double v, bool ok,
                 const char* requirement) {
  if (!ok) {
    sem.error(s.value.loc, "invalid-value",
              "'" + s.key + "' = " + format_double(v) + " " + requirement);
  }
  return ok;
}

void apply_source(Sem& sem, const Block& b, SourceSpec& out) {
  for (const Stmt& s : b.stmts) {
    if (s.key == "wavelength") {
      if (auto v = number_as(sem, s, Dim::Length)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.degenerate_frequency_hz = speed_of_light_m_s / *v;
        }
      }
    } else if (s.key == "frequency") {
      if (auto v = number_as(sem, s, Dim::Frequency)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.degenerate_frequency_hz = *v;
        }
      }
    } else if (s.key == "fsr") {
      if (auto v = number_as(sem, s, Dim::Frequency)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.fsr_hz = *v;
        }
      }
    } else if (s.key == "pairs") {
      if (auto v = int_as(sem, s)) {
        if (check_range(sem, s, static_cast<double>(*v), *v >= 0 && *v <= 4096,
                        "must lie in [0, 4096]")) {
          out.num_pairs = static_cast<int>(*v);
        }
      }
    } else if (s.key == "linewidth") {
      if (auto v = number_as(sem, s, Dim::Frequency)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.linewidth_hz = *v;
        }
      }
    } else if (s.key == "profile") {
      if (s.value.kind == Value::Kind::Ident) {
        out.explicit_profile.clear();
        if (s.value.text == "uniform") {
          out.profile = ProfileKind::Uniform;
        } else if (s.value.text == "pairs_only") {
          out.profile = ProfileKind::PairsOnly;
        } else if (s.value.text == "decaying") {
          out.profile = ProfileKind::Decaying;
        } else {
          sem.error(s.value.loc, "invalid-value",
                    "unknown profile '" + s.value.text +
                        "' (uniform, pairs_only, decaying, or a list)");
        }
      } else if (s.value.kind == Value::Kind::List) {
        if (auto v = number_list_as(sem, s)) {
          out.profile = ProfileKind::Explicit;
          out.explicit_profile = std::move(*v);
        }
      } else {
        sem.error(s.value.loc, "type-mismatch",
                  "'profile' expects an identifier or a list of weights");
      }
    } else if (s.key == "decay_ratio") {
      if (auto v = number_as(sem, s, Dim::None)) {
        if (check_range(sem, s, *v, *v > 0.0 && *v < 1.0,
                        "must lie in (0, 1)")) {
          out.decay_ratio = *v;
        }
      }
    } else {
      unknown_key(sem, b, s);
    }
  }
}

void apply_phase(Sem& sem, const Block& b, PhaseSpec& out) {
  for (const Stmt& s : b.stmts) {
    if (s.key == "value") {
      if (auto v = number_as(sem, s, Dim::Angle)) out.value_rad = *v;
    } else if (s.key == "start") {
      if (auto v = number_as(sem, s, Dim::Angle)) out.start_rad = *v;
    } else if (s.key == "stop") {
      if (auto v = number_as(sem, s, Dim::Angle)) out.stop_rad = *v;
    } else if (s.key == "steps") {
      // 0 switches a preset-supplied sweep back to a fixed phase.
      if (auto v = int_as(sem, s)) {
        if (check_range(sem, s, static_cast<double>(*v),
                        *v == 0 || (*v >= 2 && *v <= 10000000),
                        "must be 0 or lie in [2, 1e7]")) {
          out.steps = static_cast<int>(*v);
        }
      }
    } else if (s.key == "eq1_literal") {
      if (auto v = bool_as(sem, s)) out.eq1_literal = *v;
    } else {
      unknown_key(sem, b, s);
    }
  }
}

void apply_filter(Sem& sem, const Block& b, FilterSpec& out) {
  for (const Stmt& s : b.stmts) {
    if (s.key == "upper" || s.key == "lower") {
      if (auto v = int_list_as(sem, s)) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
        (s.key == "upper" ? out.upper : out.lower) = std::move(*v);
      }
    } else {
      unknown_key(sem, b, s);
    }
  }
}

void apply_noise(Sem& sem, const Block& b, NoiseSpec& out) {
  for (const Stmt& s : b.stmts) {
    if (s.key == "accidental") {
      if (auto v = number_as(sem, s, Dim::None)) {
        if (check_range(sem, s, *v, *v >= 0.0 && *v < 1.0,
                        "must lie in [0, 1)")) {
          out.accidental = *v;
        }
      }
    } else if (s.key == "imbalance") {
      if (auto v = number_as(sem, s, Dim::None)) {
        if (check_range(sem, s, *v, *v > 0.0 && *v <= 1.0,
                        "must lie in (0, 1]")) {
          out.imbalance = *v;
        }
      }
    } else if (s.key == "jitter") {
      if (auto v = number_as(sem, s, Dim::Angle)) {
        if (check_range(sem, s, *v, *v >= 0.0, "must be >= 0")) {
          out.jitter_rad = *v;
        }
      }
    } else {
      unknown_key(sem, b, s);
    }
  }
}

void apply_measure(Sem& sem, const Block& b, MeasureSpec& out) {
  for (const Stmt& s : b.stmts) {
    if (s.key == "kind") {
      auto v = ident_as(sem, s);
      if (!v) continue;
      if (*v == "correlation_matrix") {
        out.kind = MeasureKind::CorrelationMatrix;
      } else if (*v == "interference_trace") {
        out.kind = MeasureKind::InterferenceTrace;
      } else if (*v == "mzi_trace") {
        out.kind = MeasureKind::MziTrace;
      } else if (*v == "schmidt") {
        out.kind = MeasureKind::Schmidt;
      } else if (*v == "g2_bounds") {
        out.kind = MeasureKind::G2Bounds;
      } else if (*v == "hom_trace") {
        out.kind = MeasureKind::HomTrace;
      } else if (*v == "timetags") {
        out.kind = MeasureKind::TimeTags;
      } else {
        sem.error(s.value.loc, "invalid-value",
                  "unknown measurement kind '" + *v + "'");
      }
    } else if (s.key == "bins") {
      if (auto v = int_list_as(sem, s)) {
        if (v->empty()) {
          sem.error(s.value.loc, "invalid-value", "'bins' must not be empty");
        } else {
          out.bins = std::move(*v);
        }
      }
    } else if (s.key == "include_degenerate") {
      if (auto v = bool_as(sem, s)) out.include_degenerate = *v;
    } else if (s.key == "neff") {
      if (auto v = number_as(sem, s, Dim::None)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.neff = *v;
        }
      }
    } else if (s.key == "delay_start") {
      if (auto v = number_as(sem, s, Dim::Time)) out.delay_start_s = *v;
    } else if (s.key == "delay_stop") {
      if (auto v = number_as(sem, s, Dim::Time)) out.delay_stop_s = *v;
    } else if (s.key == "delay_steps") {
      if (auto v = int_as(sem, s)) {
        if (check_range(sem, s, static_cast<double>(*v),
                        *v >= 2 && *v <= 10000000, "must lie in [2, 1e7]")) {
          out.delay_steps = static_cast<int>(*v);
        }
      }
    } else if (s.key == "scheme") {
      auto v = ident_as(sem, s);
      if (!v) continue;
      if (*v == "pairs") {
        out.scheme = TagScheme::Pairs;
      } else if (*v == "hbt_thermal") {
        out.scheme = TagScheme::HbtThermal;
      } else {
        sem.error(s.value.loc, "invalid-value",
                  "unknown scheme '" + *v + "' (pairs or hbt_thermal)");
      }
    } else if (s.key == "rate") {
      if (auto v = number_as(sem, s, Dim::Frequency)) {
        if (check_range(sem, s, *v, *v >= 0.0, "must be >= 0")) {
          out.rate_hz = *v;
        }
      }
    } else if (s.key == "duration") {
      if (auto v = number_as(sem, s, Dim::Time)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.duration_s = *v;
        }
      }
    } else if (s.key == "correlation_time") {
      if (auto v = number_as(sem, s, Dim::Time)) {
        if (check_range(sem, s, *v, *v >= 0.0, "must be >= 0")) {
          out.correlation_time_s = *v;
        }
      }
    } else if (s.key == "bin_width") {
      if (auto v = number_as(sem, s, Dim::Time)) {
        if (check_range(sem, s, *v, *v > 0.0, "must be positive")) {
          out.bin_width_s = *v;
        }
      }
    } else if (s.key == "span") {
      if (auto v = number_as(sem, s, Dim::Time)) {
        if (check_range(sem, s, *v, *v >= 0.0, "must be >= 0")) {
          out.span_s = *v;
        }
      }
    } else if (s.key == "efficiency_signal" || s.key == "efficiency_idler") {
      if (auto v = number_as(sem, s, Dim::None)) {
        if (check_range(sem, s, *v, *v >= 0.0 && *v <= 1.0,
                        "must lie in [0, 1]")) {
          (s.key == "efficiency_signal" ? out.efficiency_signal
                                        : out.efficiency_idler) = *v;
        }
      }
    } else if (s.key == "dark_rate_signal" || s.key == "dark_rate_idler") {
      if (auto v = number_as(sem, s, Dim::Frequency)) {
        if (check_range(sem, s, *v, *v >= 0.0, "must be >= 0")) {
          (s.key == "dark_rate_signal" ? out.dark_rate_signal_hz
                                       : out.dark_rate_idler_hz) = *v;
        }
      }
    } else if (s.key == "time_jitter") {
      if (auto v = number_as(sem, s, Dim::Time)) {
        if (check_range(sem, s, *v, *v >= 0.0, "must be >= 0")) {
          out.time_jitter_s = *v;
        }
      }
    } else if (s.key == "modes") {
      if (auto v = int_list_as(sem, s)) {
        bool ok = !v->empty();
        for (int m : *v) ok = ok && m >= 1;
        if (!ok) {
          sem.error(s.value.loc, "invalid-value",
                    "'modes' must be a nonempty list of counts >= 1");
        } else {
          out.modes = std::move(*v);
        }
      }
    } else if (s.key == "seed") {
      if (auto v = int_as(sem, s)) {
        if (check_range(sem, s, static_cast<double>(*v), *v >= 0,
                        "must be >= 0")) {
          out.seed = static_cast<uint64_t>(*v);
        }
      }
    } else {
      unknown_key(sem, b, s);
    }
  }
}

void apply_output(Sem& sem, const Block& b, OutputSpec& out) {
  for (const Stmt& s : b.stmts) {
    if (s.key == "path") {
      if (auto v = string_as(sem, s)) out.path = std::move(*v);
    } else if (s.key == "format") {
      auto v = ident_as(sem, s);
      if (!v) continue;
      if (*v == "csv") {
        out.format = OutputSpec::Format::Csv;
      } else if (*v == "json") {
        out.format = OutputSpec::Format::Json;
      } else {
        sem.error(s.value.loc, "invalid-value",
                  "unknown format '" + *v + "' (csv or json)");
      }
    } else if (s.key == "streams") {
      if (auto v = string_as(sem, s)) out.stream_prefix = std::move(*v);
    } else if (s.key == "stream_format") {
      auto v = ident_as(sem, s);
      if (!v) continue;
      if (*v == "binary") {
        out.stream_format = OutputSpec::StreamFormat::Binary;
      } else if (*v == "csv") {
        out.stream_format = OutputSpec::StreamFormat::Csv;
      } else {
        sem.error(s.value.loc, "invalid-value",
                  "unknown stream format '" + *v + "' (binary or csv)");
      }
    } else {
      unknown_key(sem, b, s);
    }
  }
}

void final_checks(Sem& sem, const ExperimentSpec& spec) {
  const SourceSpec& src = spec.source;
  const SourceLoc sloc = spec.locs.source;
  if (src.profile == ProfileKind::Explicit) {
    if (static_cast<int>(src.explicit_profile.size()) != src.num_pairs + 1) {
      sem.error(sloc, "invalid-value",
                "explicit profile has " +
                    std::to_string(src.explicit_profile.size()) +
                    " entries; pairs = " + std::to_string(src.num_pairs) +
                    " needs " + std::to_string(src.num_pairs + 1));
      return;
    }
    double sum = 0.0;
    bool nonneg = true;
    for (size_t k = 0; k < src.explicit_profile.size(); ++k) {
      const double p = src.explicit_profile[k];
      nonneg = nonneg && p >= 0.0;
      sum += (k == 0 ? 1.0 : 2.0) * p;
    }
    if (!nonneg) {
      sem.error(sloc, "invalid-value", "profile weights must be >= 0");
    } else if (std::abs(sum - 1.0) > 1e-9) {
      sem.error(sloc, "invalid-value",
                "profile weights p0 + 2*sum(pk) = " + format_double(sum) +
                    "; must equal 1");
    }
  }
  if ((src.profile == ProfileKind::PairsOnly ||
       src.profile == ProfileKind::Decaying) &&
      src.num_pairs < 1) {
    sem.error(sloc, "invalid-value",
              "this profile needs at least one nondegenerate pair");
  }
  const MeasureKind kind = spec.measure.kind;
  if ((kind == MeasureKind::InterferenceTrace ||
       kind == MeasureKind::MziTrace) &&
      !spec.phase.sweep()) {
    sem.error(spec.locs.measure, "missing-required",
              "this measurement sweeps the pump phase; add a phase block "
              "with start, stop and steps");
  }
  if (kind == MeasureKind::HomTrace &&
      !(spec.measure.delay_stop_s > spec.measure.delay_start_s)) {
    sem.error(spec.locs.measure, "invalid-value",
              "delay_stop must exceed delay_start");
  }
  if (kind == MeasureKind::InterferenceTrace) {
    for (int bin : spec.measure.bins) {
      if (bin < 1 || bin > src.num_pairs) {
        sem.error(spec.locs.measure, "invalid-value",
                  "bins entries must name nondegenerate pairs in [1, " +
                      std::to_string(src.num_pairs) + "]");
        break;
      }
    }
  }
}

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult res;
  const std::vector<detail::Token> tokens = detail::lex(text, res.diagnostics);
  const std::vector<Block> blocks =
      detail::parse_blocks(tokens, res.diagnostics);
  Sem sem{res.diagnostics};
  for (const Diagnostic& d : res.diagnostics) {
    if (d.severity == Severity::Error) sem.failed = true;
  }

  ExperimentSpec spec;

  // A preset seeds the whole spec before any other block applies overrides,
  // regardless of where the preset block sits in the file.
  const Block* preset_block = nullptr;
  for (const Block& b : blocks) {
    if (b.name != "preset") continue;
    if (preset_block) {
      sem.error(b.loc, "duplicate-block", "more than one preset block");
      continue;
    }
    preset_block = &b;
  }
  bool have_source = false, have_measure = false;
  if (preset_block) {
    std::string name;
    for (const Stmt& s : preset_block->stmts) {
      if (s.key == "name") {
        if (auto v = ident_as(sem, s)) name = *v;
      } else {
        unknown_key(sem, *preset_block, s);
      }
    }
    if (name.empty()) {
      sem.error(preset_block->loc, "missing-required",
                "preset block needs a name");
    } else if (auto base = preset(name)) {
      spec = std::move(*base);
      have_source = have_measure = true;
    } else {
      sem.error(preset_block->loc, "invalid-value",
                "unknown preset '" + name + "'");
    }
  }

  std::set<std::string> seen;
  for (const Block& b : blocks) {
    if (b.name == "preset") continue;
    if (!seen.insert(b.name).second) {
      sem.error(b.loc, "duplicate-block",
                "block '" + b.name + "' appears more than once");
      continue;
    }
    if (b.name == "source") {
      spec.locs.source = b.loc;
      have_source = true;
      apply_source(sem, b, spec.source);
    } else if (b.name == "phase") {
      spec.locs.phase = b.loc;
      apply_phase(sem, b, spec.phase);
    } else if (b.name == "filter") {
      spec.locs.filter = b.loc;
      apply_filter(sem, b, spec.filter);
    } else if (b.name == "noise") {
      spec.locs.noise = b.loc;
      apply_noise(sem, b, spec.noise);
    } else if (b.name == "measure") {
      spec.locs.measure = b.loc;
      have_measure = true;
      apply_measure(sem, b, spec.measure);
    } else if (b.name == "output") {
      spec.locs.output = b.loc;
      apply_output(sem, b, spec.output);
    } else {
      sem.error(b.loc, "unknown-block", "unknown block '" + b.name + "'");
    }
  }

  if (!have_source) {
    sem.error({1, 1}, "missing-required",
              "no source block (and no preset to supply one)");
  }
  if (!have_measure) {
    sem.error({1, 1}, "missing-required",
              "no measure block (and no preset to supply one)");
  }
  if (!sem.failed) {
    final_checks(sem, spec);
  }
  if (!sem.failed) {
    res.spec = std::move(spec);
  }
  return res;
}

}  // namespace qfc::expspec
