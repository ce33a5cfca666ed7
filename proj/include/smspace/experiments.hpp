#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smspace/agent1d.hpp"
#include "smspace/audio.hpp"
#include "smspace/calibration.hpp"
#include "smspace/report.hpp"
#include "smspace/shapes.hpp"
#include "smspace/svg.hpp"

namespace smspace {

/// What every experiment in a run shares: one body drawn from the run seed,
/// the scan grid, matching settings and the worker count.
struct ExperimentContext {
  AgentBody body;
  ScanGrid grid{51, 51};
  MatchConfig match;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Experiment displacements are rounded to multiples of this. Must be a
  /// whole number of grid spacings.
  double lattice_step = 0.02;
  /// Share of near-identical displacements a calibrated threshold must accept,
  /// and the per-axis size of those displacements.
  double quantile = 0.9;
  double calibration_size = 0.005;

  void validate() const;
};

/// Body from the run seed, matching with CoincidencePolicy::kUnambiguous.
ExperimentContext make_context(std::uint64_t seed, ScanGrid grid = {51, 51}, std::size_t threads = 1);

/// Seed of a named sub-stream of the run (calibration, validation, ...).
std::uint64_t stream_seed(std::uint64_t run_seed, std::uint64_t stream);

struct ExperimentOutput {
  ExperimentReport report;
  svg::Figure figure;
};

// ---------------------------------------------------------------- atlas --

/// Lattice-indexed phi functions learned in one rich environment.
struct PhiAtlas {
  double step = 0.02;
  double extent = 1.8;
  std::size_t per_axis = 0;
  /// Row-major over (jy, jx). Node i of an axis sits at (i - per_axis / 2) *
  /// step, so the zero jump is always present; with an even node count the
  /// extra node is on the negative side.
  std::vector<Vec2> jumps;
  std::vector<std::size_t> sizes;  // pairs per phi
  std::vector<PhiFunction> phis;   // empty unless kept

  /// Entry for a jump on the lattice, or nullopt when outside the atlas.
  std::optional<std::size_t> index_of(const Vec2 &jump) const;
};

/// (extent / step + 1)^2. Throws ConfigError unless step divides extent.
std::size_t atlas_size(double jump_step, double jump_extent);

/// 200 sources in the 3x3 square centered on the view; the agent jumps to
/// every node of the destination lattice and rescans.
/// With `keep_phis` false only the sizes are retained (the full-resolution
/// atlas does not fit in memory).
PhiAtlas run_phi_atlas(const ExperimentContext &ctx, std::uint64_t env_seed, double jump_step, double jump_extent,
                       bool keep_phis = true);

/// Scene maker for threshold calibration with rich environments: reference
/// and test are the same agent jump (before the perturbation) in two
/// independent environments.
PairedSceneGenerator rich_jump_generator(const Vec2 &jump, double lattice_step, double jump_range = 0.0);

struct GroupLawCheck {
  std::size_t pairs_tested = 0;   // lattice pairs with a + b in the atlas
  std::size_t nonempty = 0;       // of those, compositions with a shared domain
  std::size_t within = 0;         // rho <= threshold
  double rate() const { return nonempty ? static_cast<double>(within) / static_cast<double>(nonempty) : 0.0; }
};

/// rho(phi_b o phi_a, phi_{a+b}) over every lattice pair in the atlas. When
/// `records` is given, one record per nonempty composition is appended.
GroupLawCheck check_group_law(const PhiAtlas &atlas, const MatchConfig &cfg, double threshold,
                              std::size_t threads = 1, std::vector<TrialRecord> *records = nullptr);

struct AtlasOptions {
  double jump_step = 0.2;
  double jump_extent = 1.8;
  std::size_t calibration_trials = 200;
  bool check_composition = true;
  bool keep_phis = true;
};

/// Threshold for the group-law check: the same jump, anywhere in the atlas
/// range up to 1, in two rich environments.
PhiThreshold calibrate_atlas(const ExperimentContext &ctx, const AtlasOptions &opt);

ExperimentOutput atlas_experiment(const ExperimentContext &ctx, const AtlasOptions &opt);

// ---------------------------------------------------------------- rigid --

struct RigidOptions {
  std::size_t n_trials = 1000;
  std::size_t calibration_trials = 1000;
  /// Per-axis bound on the test-minus-reference displacement.
  double max_difference = 0.1;
  /// Test with this shape only instead of a random one.
  std::optional<ShapeKind> shape;
  /// Use this difference instead of a random one.
  std::optional<Vec2> fixed_difference;
  /// Skip calibration and decide with this threshold.
  std::optional<PhiThreshold> threshold;
};

/// Calibrate the association threshold for the rigid-displacement scenes.
PhiThreshold calibrate_rigid(const ExperimentContext &ctx, std::size_t n_trials);

ExperimentOutput run_rigid_displacement(const ExperimentContext &ctx, const RigidOptions &opt);

// --------------------------------------------------------------- medium --

struct MediumOptions {
  std::size_t n_trials = 10000;
  std::size_t calibration_trials = 1000;
  /// Fresh small-deformation trials used to check the calibrated rate.
  std::size_t validation_trials = 1000;
  double max_deformation = 0.5;
  /// Deformations below this count as no change.
  double small_deformation = 0.005;
  double circle_region = 0.4;
  double jump_region = 0.6;
  std::size_t jump_bins = 4;
  std::optional<double> fixed_deformation;
  std::optional<double> epsilon_threshold;
};

/// sum_k ||s_k - s'_k'|| over the pairs of a candidate phi, given the scans
/// before and after. nullopt when no pair lands on both scans.
std::optional<double> fit_error(const PhiFunction &phi, const SmcTable &before, const SmcTable &after,
                                double proprio_tol);

ExperimentOutput run_unchanging_medium(const ExperimentContext &ctx, const MediumOptions &opt);

// -------------------------------------------------------------- relpos --

struct RelposOptions {
  std::size_t n_trials = 1000;  // per segment count
  std::size_t calibration_trials = 1000;
  std::vector<std::size_t> segments{2, 3, 4};
  Vec2 destination{0.6, 0.6};
  double intermediate_region = 0.9;
  /// Final points are offset along x by up to this much from the destination.
  double offset_range = 0.15;
  std::optional<double> fixed_offset;
  std::optional<PhiThreshold> threshold;
};

/// Threshold for the reference jump to the destination in rich environments.
PhiThreshold calibrate_relpos(const ExperimentContext &ctx, const RelposOptions &opt);

ExperimentOutput run_relative_position(const ExperimentContext &ctx, const RelposOptions &opt);

// --------------------------------------------------------------- demo1d --

struct Demo1DOptions {
  Agent1D agent;
  std::size_t n_nodes = 201;
  std::size_t n_lights = 10;
  /// Trials shift the environment by a random whole number of node spacings
  /// up to this size, or by `fixed_shift` (also rounded to the node spacing).
  double max_shift = 0.2;
  std::optional<double> fixed_shift;
  std::size_t n_trials = 20;
  double photo_tol = 0.005;
  std::size_t context_radius = 3;
};

/// Matching used for single-receptor scans with `opt`'s tolerances.
MatchConfig demo1d_match_config(const Demo1DOptions &opt);

/// Largest proprioceptive error a photo match can cause: max |dp/dx| times
/// photo_tol over min |ds/dx| on the matched part of the scan.
double jitter_bound(const Agent1D &agent, const SmcTable &table, const PhiFunction &phi, double photo_tol);

/// Sup-norm gap between two 1D phi curves over the domain points they share.
std::optional<double> sup_gap(const PhiFunction &a, const PhiFunction &b, double domain_tol);

ExperimentOutput run_1d_demo(std::uint64_t seed, const Demo1DOptions &opt, std::size_t threads = 1);

// ---------------------------------------------------------------- audio --

struct AudioOptions {
  HairCell cell;
  std::size_t n_nodes = kAudioNodes;
  std::size_t n_trials = 100;
  std::size_t calibration_trials = 100;
  std::size_t group_cases = 20;
  double note_lo = 220.0;
  double note_hi = 880.0;
  int max_semitones = 12;
  double photo_tol = 0.005;
  double quantile = 0.9;
};

ExperimentOutput run_audio(std::uint64_t seed, const AudioOptions &opt, std::size_t threads = 1);

}  // namespace smspace
