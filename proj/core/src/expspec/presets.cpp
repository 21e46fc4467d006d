#include <map>
#include <numbers>

#include "qfc/expspec.hpp"

namespace qfc::expspec {
namespace {

struct PresetDef {
  ExperimentSpec spec;
  std::string description;
};

ExperimentSpec base(MeasureKind kind, int pairs, ProfileKind profile) {
  ExperimentSpec s;
  s.source.num_pairs = pairs;
  s.source.profile = profile;
  s.measure.kind = kind;
  return s;
}

void sweep(ExperimentSpec& s, double start, double stop, int steps) {
  s.phase.start_rad = start;
  s.phase.stop_rad = stop;
  s.phase.steps = steps;
}

std::map<std::string, PresetDef> build_presets() {
  std::map<std::string, PresetDef> out;
  const double pi = std::numbers::pi;

  {
    // Broad bunched-pair correlation map: uniform anti-diagonal over 21 bins.
    ExperimentSpec s = base(MeasureKind::CorrelationMatrix, 10,
                            ProfileKind::Uniform);
    s.phase.value_rad = 0.0;
    s.noise.accidental = 0.0025;
    out["fig2b"] = {s, "21-bin coincidence map of the bunched state"};
  }
  {
    // Same comb with the pump set for antibunching: cross-path anti-diagonal.
    ExperimentSpec s = base(MeasureKind::CorrelationMatrix, 10,
                            ProfileKind::Uniform);
    s.phase.value_rad = pi / 2.0;
    s.noise.accidental = 0.0025;
    out["fig2c"] = {s, "21-bin coincidence map of the split state"};
  }
  {
    // Auto-correlation of one and five comb lines through a 50/50 splitter.
    ExperimentSpec s = base(MeasureKind::TimeTags, 10, ProfileKind::Uniform);
    s.measure.scheme = TagScheme::HbtThermal;
    s.measure.modes = {1, 5};
    s.measure.rate_hz = 4e5;
    s.measure.duration_s = 1.0;
    s.measure.bin_width_s = 2e-10;
    s.measure.span_s = 2e-8;
    s.measure.seed = 7;
    out["fig2d"] = {s, "thermal g2 of single and five-line marginals"};
  }
  {
    // Schmidt lower bound and thermal upper bound versus comb size.
    ExperimentSpec s = base(MeasureKind::G2Bounds, 10, ProfileKind::Decaying);
    s.measure.neff = 1.039;
    out["fig2e"] = {s, "dimension bounds versus number of bin pairs"};
  }
  {
    // Single-photon interferometer reference fringe.
    ExperimentSpec s = base(MeasureKind::MziTrace, 10, ProfileKind::Uniform);
    sweep(s, 0.0, 4.0 * pi, 401);
    out["fig3a"] = {s, "classical interferometer fringe, one period per 2pi"};
  }
  {
    // Two-photon fringe on the first bin pair; half-period oscillation.
    ExperimentSpec s = base(MeasureKind::InterferenceTrace, 10,
                            ProfileKind::Uniform);
    sweep(s, 0.0, 4.0 * pi, 401);
    s.measure.bins = {1};
    s.noise.accidental = 0.032;
    out["fig3b"] = {s, "bunched/split fringes on bin pair 1"};
  }
  {
    ExperimentSpec s = base(MeasureKind::InterferenceTrace, 10,
                            ProfileKind::Uniform);
    sweep(s, 0.0, 4.0 * pi, 401);
    s.measure.bins = {4};
    s.noise.accidental = 0.0401;
    out["fig3c"] = {s, "bunched/split fringes on bin pair 4"};
  }
  {
    ExperimentSpec s = base(MeasureKind::InterferenceTrace, 10,
                            ProfileKind::Uniform);
    sweep(s, 0.0, 4.0 * pi, 401);
    s.measure.bins = {1, 2, 3, 4, 5};
    s.noise.accidental = 0.0714;
    out["fig3d"] = {s, "aggregated fringes over bin pairs 1..5"};
  }
  {
    ExperimentSpec s = base(MeasureKind::CorrelationMatrix, 5,
                            ProfileKind::Uniform);
    s.phase.value_rad = 0.0;
    s.noise.accidental = 0.05;
    out["fig4a"] = {s, "coincidence maps at the bunched phase"};
  }
  {
    ExperimentSpec s = base(MeasureKind::CorrelationMatrix, 5,
                            ProfileKind::Uniform);
    s.phase.value_rad = pi / 4.0;
    s.noise.accidental = 0.05;
    out["fig4b"] = {s, "coincidence maps at the balanced phase"};
  }
  {
    ExperimentSpec s = base(MeasureKind::CorrelationMatrix, 5,
                            ProfileKind::Uniform);
    s.phase.value_rad = pi / 2.0;
    s.noise.accidental = 0.05;
    out["fig4c"] = {s, "coincidence maps at the split phase"};
  }
  {
    // Dip of the degenerate line alone; contrast capped at 0.896.
    ExperimentSpec s = base(MeasureKind::HomTrace, 0, ProfileKind::Uniform);
    s.measure.delay_start_s = -4e-9;
    s.measure.delay_stop_s = 4e-9;
    s.measure.delay_steps = 401;
    s.noise.accidental = 0.104 / 1.896;
    out["fig5b"] = {s, "two-photon dip of the degenerate line"};
  }
  {
    // Five nondegenerate pairs: dip plus revivals every 1/(2*fsr).
    ExperimentSpec s = base(MeasureKind::HomTrace, 5, ProfileKind::PairsOnly);
    s.measure.delay_start_s = -2.5e-12;
    s.measure.delay_stop_s = 2.5e-12;
    s.measure.delay_steps = 2001;
    out["fig5c"] = {s, "interference revivals of five bin pairs"};
  }

  for (auto& [name, def] : out) {
    def.spec.preset_name = name;
    def.spec.output.path = name + ".csv";
  }
  return out;
}

const std::map<std::string, PresetDef>& presets() {
  static const std::map<std::string, PresetDef> table = build_presets();
  return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, def] : presets()) v.push_back(name);
    return v;
  }();
  return names;
}

std::optional<ExperimentSpec> preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) return std::nullopt;
  return it->second.spec;
}

std::string preset_description(const std::string& name) {
  const auto it = presets().find(name);
  return it == presets().end() ? std::string() : it->second.description;
}

}  // namespace qfc::expspec
