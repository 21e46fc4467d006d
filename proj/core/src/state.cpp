#include "qfc/state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace qfc {

namespace {
constexpr double kNormTol = 1e-12;
const std::complex<double> kI{0.0, 1.0};
}  // namespace

bool is_pre_splitter(Path p) { return p == Path::Cw || p == Path::Ccw; }

const char* path_name(Path p) {
  switch (p) {
    case Path::Cw: return "cw";
    case Path::Ccw: return "ccw";
    case Path::Upper: return "upper";
    case Path::Lower: return "lower";
  }
  return "?";
}

double TwoPhotonState::norm_squared() const {
  double n = 0.0;
  for (const auto& [key, amp] : amplitudes) n += std::norm(amp);
  return n;
}

std::complex<double> TwoPhotonState::amplitude(const ModePair& key) const {
  auto it = std::lower_bound(amplitudes.begin(), amplitudes.end(), key,
                             [](const auto& e, const ModePair& k) { return e.first < k; });
  if (it != amplitudes.end() && it->first == key) return it->second;
  return {};
}

void TwoPhotonState::set_amplitude(const ModePair& key, std::complex<double> v) {
  auto it = std::lower_bound(amplitudes.begin(), amplitudes.end(), key,
                             [](const auto& e, const ModePair& k) { return e.first < k; });
  if (it != amplitudes.end() && it->first == key) {
    it->second = v;
  } else {
    amplitudes.insert(it, {key, v});
  }
}

void TwoPhotonState::validate() const {
  basis.validate();
  for (const auto& [key, amp] : amplitudes) {
    (void)amp;
    if (key.a.bin + key.b.bin != 0)
      throw std::invalid_argument("state: stored pair violates energy conservation");
    if (std::abs(key.a.bin) > basis.num_pairs || std::abs(key.b.bin) > basis.num_pairs)
      throw std::invalid_argument("state: bin outside the comb");
    const bool pre = stage == Stage::PreSplitter;
    if (is_pre_splitter(key.a.path) != pre || is_pre_splitter(key.b.path) != pre)
      throw std::invalid_argument("state: path labels inconsistent with stage");
  }
  if (!empty() && std::abs(norm_squared() - 1.0) > kNormTol)
    throw std::invalid_argument("state: not normalized");
}

TwoPhotonState sagnac_source_state(const CombSpec& spec, double phi) {
  spec.validate();
  TwoPhotonState st;
  st.basis = spec;
  st.stage = Stage::PreSplitter;
  const std::complex<double> pair_phase = std::exp(kI * (2.0 * phi));
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int k = 0; k <= spec.num_pairs; ++k) {
    const double w = spec.pair_weight(k);
    if (w == 0.0) continue;
    const double a = std::sqrt(w) * inv_sqrt2;
    st.set_amplitude(ModePair::make({Path::Cw, k}, {Path::Cw, -k}), a);
    st.set_amplitude(ModePair::make({Path::Ccw, k}, {Path::Ccw, -k}), a * pair_phase);
  }
  return st;
}

namespace {

// Splitter images of one creation operator: CW and CCW both map onto
// (UPPER, LOWER)/sqrt(2), with a sign flip on LOWER for CCW.
struct PathImage {
  Path path;
  double coeff;
};

void splitter_images(Path p, PathImage out[2]) {
  const double s = 1.0 / std::numbers::sqrt2;
  if (p == Path::Cw) {
    out[0] = {Path::Upper, s};
    out[1] = {Path::Lower, s};
  } else {
    out[0] = {Path::Upper, s};
    out[1] = {Path::Lower, -s};
  }
}

}  // namespace

TwoPhotonState apply_balanced_splitter(const TwoPhotonState& in) {
  if (in.stage != Stage::PreSplitter)
    throw std::invalid_argument("splitter: state already passed the splitter");
  TwoPhotonState out;
  out.basis = in.basis;
  out.stage = Stage::PostSplitter;

  // Work on raw operator coefficients: amplitude A on a normalized ket is the
  // coefficient A (distinct modes) or A/sqrt(2) (same mode) of the operator
  // product; transform each factor and recollect.
  std::map<ModePair, std::complex<double>> coeff;
  for (const auto& [key, amp] : in.amplitudes) {
    const std::complex<double> c = key.degenerate() ? amp / std::numbers::sqrt2 : amp;
    PathImage ia[2], ib[2];
    splitter_images(key.a.path, ia);
    splitter_images(key.b.path, ib);
    for (const auto& x : ia) {
      for (const auto& y : ib) {
        ModePair k = ModePair::make({x.path, key.a.bin}, {y.path, key.b.bin});
        coeff[k] += c * x.coeff * y.coeff;
      }
    }
  }
  for (const auto& [key, c] : coeff) {
    const std::complex<double> amp = key.degenerate() ? c * std::numbers::sqrt2 : c;
    if (std::norm(amp) == 0.0) continue;
    out.set_amplitude(key, amp);
  }
  return out;
}

TwoPhotonState output_state(const CombSpec& spec, double phi, bool eq1_literal) {
  const double eff = eq1_literal ? phi + 0.5 * std::numbers::pi : phi;
  return apply_balanced_splitter(sagnac_source_state(spec, eff));
}

std::pair<TwoPhotonState, double> apply_filter(const TwoPhotonState& in, Path path,
                                               const std::set<int>& passband) {
  if (in.stage != Stage::PostSplitter)
    throw std::invalid_argument("filter: spectral filters act on the splitter outputs");
  if (!(path == Path::Upper || path == Path::Lower))
    throw std::invalid_argument("filter: path must be upper or lower");

  TwoPhotonState out;
  out.basis = in.basis;
  out.stage = Stage::PostSplitter;
  double surviving = 0.0;
  for (const auto& [key, amp] : in.amplitudes) {
    const bool blocked = (key.a.path == path && !passband.count(key.a.bin)) ||
                         (key.b.path == path && !passband.count(key.b.bin));
    if (blocked) continue;
    surviving += std::norm(amp);
    out.set_amplitude(key, amp);
  }
  if (surviving <= 0.0) {
    out.amplitudes.clear();
    return {out, 0.0};
  }
  const double scale = 1.0 / std::sqrt(surviving);
  for (auto& [key, amp] : out.amplitudes) amp *= scale;
  return {out, surviving};
}

}  // namespace qfc
