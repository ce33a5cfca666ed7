#include <cmath>

#include "common.hpp"
#include "smspace/errors.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

namespace {


struct PathResult {
  double offset = 0.0;
  std::vector<Vec2> points;  // origin, intermediates, final point
  std::optional<double> rho;
  std::size_t reference_pairs = 0;
  std::size_t composed_pairs = 0;
};

PathResult run_path(const ExperimentContext &ctx, const RelposOptions &opt, CounterRng &rng, std::size_t segments) {
  PathResult res;
  const Vec2 env_center = ctx.body.retina_range().center() + 0.5 * opt.destination;

  const Environment ref_env = detail::rich_environment(rng, env_center);
  const PhiFunction ref = learn_phi(scan(ref_env, ctx.body, {}, ctx.grid),
                                    scan(ref_env, ctx.body, opt.destination, ctx.grid), ctx.match);
  res.reference_pairs = ref.size();

  // The environment is replaced for the path.
  const Environment env = detail::rich_environment(rng, env_center);
  if (opt.fixed_offset) {
    res.offset = *opt.fixed_offset;
  } else {
    const auto k_max = static_cast<long>(std::floor(opt.offset_range / ctx.lattice_step + 1e-9));
    const auto k = static_cast<long>(rng.below(static_cast<std::size_t>(2 * k_max + 1))) - k_max;
    res.offset = static_cast<double>(k) * ctx.lattice_step;
  }
  res.points.push_back({});
  const Box region = Box::centered({}, opt.intermediate_region);
  for (std::size_t j = 1; j < segments; ++j) {
    res.points.push_back(snap_to_lattice(uniform_in(rng, region), ctx.lattice_step));
  }
  res.points.push_back(opt.destination + Vec2{res.offset, 0.0});

  std::vector<SmcTable> scans;
  for (const auto &p : res.points) scans.push_back(scan(env, ctx.body, p, ctx.grid));
  PhiFunction composed = learn_phi(scans[0], scans[1], ctx.match);
  for (std::size_t j = 1; j + 1 < scans.size() && !composed.empty(); ++j) {
    composed = compose_phi(learn_phi(scans[j], scans[j + 1], ctx.match), composed, ctx.match);
  }
  res.composed_pairs = composed.size();
  if (!composed.empty()) res.rho = phi_distance(ref, composed, ctx.match.dedup_tol);
  return res;
}

}  // namespace

PhiThreshold calibrate_relpos(const ExperimentContext &ctx, const RelposOptions &opt) {
  CalibrationOptions co;
  co.n_trials = opt.calibration_trials;
  co.seed = stream_seed(ctx.seed, detail::kCalibrationStream);
  co.threads = ctx.threads;
  co.quantile = ctx.quantile;
  co.displacement_size = ctx.calibration_size;
  return calibrate_threshold(ctx.body, ctx.grid, rich_jump_generator(opt.destination, ctx.lattice_step), ctx.match,
                             co);
}

ExperimentOutput run_relative_position(const ExperimentContext &ctx, const RelposOptions &opt) {
  ctx.validate();
  for (std::size_t s : opt.segments) {
    if (s < 1) throw ConfigError("relpos.segments must be >= 1");
  }
  if (!(opt.offset_range >= 0.0)) throw ConfigError("relpos.offset_range must be >= 0");
  const PhiThreshold th = opt.threshold ? *opt.threshold : calibrate_relpos(ctx, opt);

  ExperimentOutput out;
  auto &r = out.report;
  r.experiment = "relpos";
  r.seed = ctx.seed;
  r.config = detail::context_json(ctx);
  r.config["n_trials"] = opt.n_trials;
  r.config["calibration_trials"] = opt.calibration_trials;
  r.config["segments"] = opt.segments;
  r.config["destination"] = detail::vec_json(opt.destination);
  r.config["intermediate_region"] = opt.intermediate_region;
  r.config["offset_range"] = opt.offset_range;
  if (opt.fixed_offset) r.config["fixed_offset"] = *opt.fixed_offset;

  const std::size_t total = opt.n_trials * opt.segments.size();
  r.trials.resize(total);
  parallel_for(total, ctx.threads, [&](std::size_t i) {
    const std::size_t segments = opt.segments[i / opt.n_trials];
    CounterRng rng(trial_seed(ctx.seed, i));
    const PathResult res = run_path(ctx, opt, rng, segments);

    TrialRecord &t = r.trials[i];
    t.index = i;
    t.seed = trial_seed(ctx.seed, i);
    t.group = std::to_string(segments) + "-segment";
    for (std::size_t j = 1; j < res.points.size(); ++j) t.displacements.push_back(res.points[j] - res.points[j - 1]);
    t.phi_ids.push_back("trial" + std::to_string(i) + "/reference");
    for (std::size_t j = 1; j < res.points.size(); ++j) {
      t.phi_ids.push_back("trial" + std::to_string(i) + "/segment" + std::to_string(j));
    }
    t.statistic = res.rho;
    t.threshold = th.value;
    t.variable = res.offset;
    t.expected = std::fabs(res.offset) < 1e-9;
    t.extra = {{"reference_pairs", res.reference_pairs}, {"composed_pairs", res.composed_pairs}};
    finalize(t);
  });

  nlohmann::json by_segments = nlohmann::json::object();
  for (std::size_t s : opt.segments) {
    const std::string group = std::to_string(s) + "-segment";
    r.curves.push_back(rate_by_value("association_" + group, "destination offset", "P(associated)", r.trials,
                                     [group](const TrialRecord &t) { return t.group == group; },
                                     [](const TrialRecord &t) { return t.variable; },
                                     [](const TrialRecord &t) { return t.decision; }));
    std::size_t n0 = 0, a0 = 0, empty = 0, n = 0, correct = 0;
    for (const auto &t : r.trials) {
      if (t.group != group) continue;
      ++n;
      correct += t.correct;
      if (t.extra["composed_pairs"].get<std::size_t>() == 0) ++empty;
      if (t.expected) {
        ++n0;
        a0 += t.decision;
      }
    }
    by_segments[group] = {{"trials", n},
                          {"empty_compositions", empty},
                          {"trials_zero_offset", n0},
                          {"association_zero_offset", n0 ? static_cast<double>(a0) / static_cast<double>(n0) : 0.0},
                          {"accuracy", n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0}};
  }
  r.summary["threshold"] = detail::threshold_json(th);
  r.summary["segments"] = std::move(by_segments);

  auto &fig = out.figure;
  fig.title = "relative position";
  fig.panels.push_back(detail::curve_panel(r.curves, "association vs destination offset"));
  svg::Panel paths;
  paths.title = "sample paths";
  paths.x_label = "x";
  paths.y_label = "y";
  paths.equal_aspect = true;
  for (std::size_t i = 0; i < std::min<std::size_t>(total, 12); ++i) {
    std::vector<Vec2> pts{{}};
    for (const auto &d : r.trials[i].displacements) pts.push_back(pts.back() + d);
    paths.line(std::move(pts));
  }
  paths.scatter({opt.destination}, "destination", "#000000");
  fig.panels.push_back(std::move(paths));
  return out;
}

}  // namespace smspace
