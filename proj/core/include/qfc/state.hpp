#pragma once

#include <complex>
#include <set>
#include <utility>
#include <vector>

#include "qfc/comb.hpp"

namespace qfc {

// Spatial mode label. Cw/Ccw are the two pump directions before the balanced
// splitter; Upper/Lower are the splitter outputs.
enum class Path : unsigned char { Cw, Ccw, Upper, Lower };

bool is_pre_splitter(Path p);
const char* path_name(Path p);

struct Mode {
  Path path;
  int bin;

  friend bool operator==(const Mode&, const Mode&) = default;
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

// Unordered pair of occupied modes; canonical order a <= b. a == b encodes a
// doubly occupied mode.
struct ModePair {
  Mode a, b;

  static ModePair make(Mode x, Mode y) { return x <= y ? ModePair{x, y} : ModePair{y, x}; }
  bool degenerate() const { return a == b; }

  friend bool operator==(const ModePair&, const ModePair&) = default;
  friend auto operator<=>(const ModePair&, const ModePair&) = default;
};

enum class Stage : unsigned char { PreSplitter, PostSplitter };

// Two-photon state as amplitudes over unordered mode pairs. Amplitudes
// multiply normalized kets: |m1,m2> for distinct modes and the two-photon
// Fock ket |2_m> = (a_m^dag)^2/sqrt(2)|0> for a doubly occupied mode, so the
// norm is plainly sum |A|^2 = 1. Every stored pair satisfies
// bin(a) + bin(b) = 0 (pairwise energy conservation about the degenerate
// resonance).
struct TwoPhotonState {
  CombSpec basis;
  Stage stage = Stage::PreSplitter;
  std::vector<std::pair<ModePair, std::complex<double>>> amplitudes;  // sorted by key

  bool empty() const { return amplitudes.empty(); }
  double norm_squared() const;
  std::complex<double> amplitude(const ModePair& key) const;         // 0 if absent
  void set_amplitude(const ModePair& key, std::complex<double> v);   // inserts keeping order

  // Throws if normalization (1 within 1e-12), energy conservation, or
  // path/stage consistency is violated. Empty states are exempt from the
  // normalization check (heralding-probability-zero marker).
  void validate() const;
};

// Bidirectionally pumped source state:
//   (1/sqrt(2)) * sum_pairs sqrt(P_K) (|CW_K> + e^{i 2 phi} |CCW_K>)
// where |X_K> is the normalized two-photon ket on the resonance pair {K,-K}
// of path X and P_K is CombSpec::pair_weight. The phase shifter sits in the
// CCW arm before the splitter, so each photon picks up phi and the pair 2*phi.
TwoPhotonState sagnac_source_state(const CombSpec& spec, double phi);

// Balanced splitter on the path degree of freedom, applied to both photons:
//   CW -> (UPPER + LOWER)/sqrt(2),  CCW -> (UPPER - LOWER)/sqrt(2).
// The real convention is chosen so that composing with sagnac_source_state
// gives same-path amplitudes proportional to cos(phi) (see output_state).
// Requires a pre-splitter state; preserves the norm exactly.
TwoPhotonState apply_balanced_splitter(const TwoPhotonState& in);

// sagnac_source_state followed by apply_balanced_splitter. Same-path
// (bunching) pair amplitudes scale with cos(phi), cross-path (splitting)
// amplitudes with sin(phi). With eq1_literal the phase is offset by pi/2,
// which interchanges the two roles (bunching with sin(phi)).
TwoPhotonState output_state(const CombSpec& spec, double phi, bool eq1_literal = false);

// Spectral filter on one output path: keeps only amplitudes whose photons on
// `path` occupy bins in `passband` (photons on the other path are untouched).
// Returns the renormalized state and the heralding probability (surviving
// norm). Probability 0 returns the empty-state marker, not renormalized.
std::pair<TwoPhotonState, double> apply_filter(const TwoPhotonState& in, Path path,
                                               const std::set<int>& passband);

}  // namespace qfc
