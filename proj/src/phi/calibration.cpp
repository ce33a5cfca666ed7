#include "smspace/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smspace/errors.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

PhiFunction learn_scene_phi(const AgentBody &body, const ScanGrid &grid, const Scene &scene, const MatchConfig &cfg) {
  const SmcTable before = scan(scene.before, body, scene.agent_before, grid);
  const SmcTable after = scan(scene.after, body, scene.agent_after, grid);
  return learn_phi(before, after, cfg);
}

double coverage_quantile(std::vector<double> values, std::size_t total, double q) {
  if (values.empty()) throw CalibrationError("no defined values to take a quantile of");
  std::sort(values.begin(), values.end());
  const auto needed = static_cast<std::size_t>(std::ceil(q * static_cast<double>(total) - 1e-9));
  if (needed == 0) return values.front();
  if (needed > values.size()) return values.back();
  return values[needed - 1];
}

PhiThreshold calibrate_threshold(const AgentBody &body, const ScanGrid &grid, const PairedSceneGenerator &generator,
                                 const MatchConfig &cfg, const CalibrationOptions &options) {
  return calibrate_threshold(body, grid, generator, cfg, options, nullptr);
}

PhiThreshold calibrate_threshold(const AgentBody &body, const ScanGrid &grid, const PairedSceneGenerator &generator,
                                 const MatchConfig &cfg, const CalibrationOptions &options,
                                 CalibrationSample *sample) {
  if (options.n_trials < 20) throw ConfigError("calibration needs at least 20 trials");
  if (!(options.quantile > 0.0 && options.quantile <= 1.0)) throw ConfigError("quantile must lie in (0, 1]");
  if (!(options.displacement_size >= 0.0)) throw ConfigError("displacement_size must be >= 0");
  cfg.validate();

  std::vector<std::optional<double>> distances(options.n_trials);
  parallel_for(options.n_trials, options.threads, [&](std::size_t t) {
    CounterRng rng(trial_seed(options.seed, t));
    const double h = options.displacement_size;
    const Vec2 perturbation{rng.uniform(-h, h), rng.uniform(-h, h)};
    const PairedScene scene = generator(rng, perturbation);
    const PhiFunction ref = learn_scene_phi(body, grid, scene.reference, cfg);
    const PhiFunction test = learn_scene_phi(body, grid, scene.test, cfg);
    distances[t] = phi_distance(ref, test, cfg.dedup_tol);
  });

  std::vector<double> defined;
  for (const auto &d : distances) {
    if (d) defined.push_back(*d);
  }
  const std::size_t undefined = options.n_trials - defined.size();
  if (2 * undefined > options.n_trials) {
    throw CalibrationError("calibration failed: " + std::to_string(undefined) + " of " +
                           std::to_string(options.n_trials) + " trials had no shared domain");
  }
  if (sample) sample->distances = distances;

  PhiThreshold th;
  th.value = coverage_quantile(std::move(defined), options.n_trials, options.quantile);
  th.quantile = options.quantile;
  th.displacement_size = options.displacement_size;
  th.n_trials = options.n_trials;
  th.n_undefined = undefined;
  return th;
}

}  // namespace smspace
