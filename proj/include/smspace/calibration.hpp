#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "smspace/body.hpp"
#include "smspace/environment.hpp"
#include "smspace/phi.hpp"
#include "smspace/rng.hpp"
#include "smspace/sensors.hpp"

namespace smspace {

/// One change the agent experiences: scan `before` from `agent_before`, then
/// scan `after` from `agent_after`.
struct Scene {
  Environment before;
  Environment after;
  Vec2 agent_before;
  Vec2 agent_after;
};

/// Reference and test change to be compared by phi_distance.
struct PairedScene {
  Scene reference;
  Scene test;
};

/// Builds a paired scene whose test displacement differs from the reference
/// one by `perturbation` (before any lattice snapping the generator applies).
using PairedSceneGenerator = std::function<PairedScene(CounterRng &rng, const Vec2 &perturbation)>;

struct CalibrationOptions {
  std::size_t n_trials = 1000;
  double quantile = 0.9;
  double displacement_size = 0.005;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Decision threshold on phi_distance.
struct PhiThreshold {
  double value = 0.0;
  double quantile = 0.9;
  double displacement_size = 0.005;
  std::size_t n_trials = 0;
  std::size_t n_undefined = 0;
};

/// Scan both sides of a scene and learn its phi.
PhiFunction learn_scene_phi(const AgentBody &body, const ScanGrid &grid, const Scene &scene, const MatchConfig &cfg);

/// Smallest value v in `values` such that at least ceil(q * total) of `total`
/// trials are <= v, where `total` may exceed values.size() (missing entries
/// count as never identical). Falls back to the largest value when the level
/// cannot be reached. Throws CalibrationError on an empty sample.
double coverage_quantile(std::vector<double> values, std::size_t total, double q);

/// Threshold such that `quantile` of test displacements within
/// `displacement_size` per axis of the reference are judged identical. An
/// undefined distance counts as not identical. Throws ConfigError when
/// n_trials < 20 and CalibrationError when more than half of the distances
/// are undefined.
PhiThreshold calibrate_threshold(const AgentBody &body, const ScanGrid &grid, const PairedSceneGenerator &generator,
                                 const MatchConfig &cfg, const CalibrationOptions &options);

/// Per-trial distances of the last calibration, for reports.
struct CalibrationSample {
  std::vector<std::optional<double>> distances;
};

PhiThreshold calibrate_threshold(const AgentBody &body, const ScanGrid &grid, const PairedSceneGenerator &generator,
                                 const MatchConfig &cfg, const CalibrationOptions &options,
                                 CalibrationSample *sample);

}  // namespace smspace
