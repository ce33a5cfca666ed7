#pragma once

#include <vector>

#include "json.hpp"
#include "smspace/phi.hpp"

namespace smspace {

struct Note {
  double freq = 440.0;  // Hz
  double amp = 1.0;

  friend bool operator==(const Note &, const Note &) = default;
};

/// A sustained sine tone or a set of them.
struct Chord {
  std::vector<Note> notes;

  /// Throws ConfigError on a non-positive frequency or negative amplitude.
  void validate() const;
  friend bool operator==(const Chord &, const Chord &) = default;
};

/// Multiply every frequency by k > 0.
Chord transpose(const Chord &chord, double k);

/// A hair cell whose eigenfrequency the agent can tune. Resonance is a
/// Gaussian in log-frequency of width `width`, so transposing the input by k
/// shifts the response curve by ln k exactly.
struct HairCell {
  double f_min = 110.0;
  double f_max = 1760.0;
  double width = 0.3;

  /// Throws ConfigError unless 0 < f_min < f_max and width > 0.
  void validate() const;
  /// Muscle readout: normalized log-frequency passed through the same fixed
  /// tanh nonlinearity as the 1D agent. Monotone and invertible.
  double proprio(double f) const;
  double proprio_inverse(double p) const;
  /// Eigenfrequencies of an n-node log-uniform scan, f_min and f_max included.
  std::vector<double> grid(std::size_t n_nodes) const;
};

/// s = sum_i A_i exp(-(ln(f_i / f))^2 / w^2). Throws RangeError when f is
/// outside [f_min, f_max].
double haircell_response(const Chord &chord, const HairCell &cell, double f_eigen);

/// Tune the cell over a log-uniform grid and tabulate <p, s>. Throws
/// ConfigError when n_nodes < 2.
SmcTable audio_scan(const Chord &chord, const HairCell &cell, std::size_t n_nodes);

/// Scan before and after, then learn_phi with `cfg`.
PhiFunction audio_learn_phi(const Chord &before, const Chord &after, const HairCell &cell, std::size_t n_nodes,
                            const MatchConfig &cfg);

/// Four nodes per semitone over the default four octaves.
inline constexpr std::size_t kAudioNodes = 193;

/// Matching settings for a single-receptor scan at kAudioNodes: short context
/// windows, one-to-one matches and a dedup tolerance below the proprioceptive
/// node spacing.
MatchConfig audio_match_config(double photo_tol = 0.005);

// [{"freq": 440, "amp": 1}, ...]
nlohmann::json chord_to_json(const Chord &chord);
Chord chord_from_json(const nlohmann::json &doc);

}  // namespace smspace
