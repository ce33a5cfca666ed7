#include <cmath>

#include "common.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

namespace {

struct RigidDraw {
  Vec2 ref_center;
  Vec2 shift;  // reference displacement, on the lattice
  ShapeKind shape = ShapeKind::kCircle;
  Vec2 test_center;
};

// Centers are uniform over the retina range as seen from the agent.
RigidDraw draw_rigid(CounterRng &rng, const ExperimentContext &ctx, const std::optional<ShapeKind> &shape) {
  const Box region = ctx.body.retina_range();
  RigidDraw d;
  d.ref_center = uniform_in(rng, region);
  const Vec2 dest = uniform_in(rng, region);
  d.shift = snap_to_lattice(dest - d.ref_center, ctx.lattice_step);
  d.shape = shape ? *shape : kAllShapes[rng.below(kAllShapes.size())];
  d.test_center = uniform_in(rng, region);
  return d;
}

PairedScene rigid_scene(const RigidDraw &d, const Vec2 &difference) {
  const ObjectShape circle = standard_shape(ShapeKind::kCircle);
  const ObjectShape test = standard_shape(d.shape);
  return {{make_object(circle, d.ref_center), make_object(circle, d.ref_center + d.shift), {}, {}},
          {make_object(test, d.test_center), make_object(test, d.test_center + d.shift + difference), {}, {}}};
}

}  // namespace

PhiThreshold calibrate_rigid(const ExperimentContext &ctx, std::size_t n_trials) {
  CalibrationOptions co;
  co.n_trials = n_trials;
  co.seed = stream_seed(ctx.seed, detail::kCalibrationStream);
  co.threads = ctx.threads;
  co.quantile = ctx.quantile;
  co.displacement_size = ctx.calibration_size;
  const PairedSceneGenerator gen = [&ctx](CounterRng &rng, const Vec2 &perturbation) {
    const RigidDraw d = draw_rigid(rng, ctx, std::nullopt);
    return rigid_scene(d, snap_to_lattice(perturbation, ctx.lattice_step));
  };
  return calibrate_threshold(ctx.body, ctx.grid, gen, ctx.match, co);
}

ExperimentOutput run_rigid_displacement(const ExperimentContext &ctx, const RigidOptions &opt) {
  ctx.validate();
  const PhiThreshold th = opt.threshold ? *opt.threshold : calibrate_rigid(ctx, opt.calibration_trials);

  ExperimentOutput out;
  auto &r = out.report;
  r.experiment = "rigid";
  r.seed = ctx.seed;
  r.config = detail::context_json(ctx);
  r.config["n_trials"] = opt.n_trials;
  r.config["calibration_trials"] = opt.calibration_trials;
  r.config["max_difference"] = opt.max_difference;
  r.config["shape"] = opt.shape ? to_string(*opt.shape) : "random";
  if (opt.fixed_difference) r.config["fixed_difference"] = detail::vec_json(*opt.fixed_difference);

  r.trials.resize(opt.n_trials);
  parallel_for(opt.n_trials, ctx.threads, [&](std::size_t i) {
    CounterRng rng(trial_seed(ctx.seed, i));
    const RigidDraw d = draw_rigid(rng, ctx, opt.shape);
    Vec2 diff;
    if (opt.fixed_difference) {
      diff = *opt.fixed_difference;
    } else {
      const double m = opt.max_difference;
      diff = snap_to_lattice(uniform_in(rng, Box{{-m, -m}, {m, m}}), ctx.lattice_step);
    }
    const PairedScene scene = rigid_scene(d, diff);
    const PhiFunction ref = learn_scene_phi(ctx.body, ctx.grid, scene.reference, ctx.match);
    const PhiFunction test = learn_scene_phi(ctx.body, ctx.grid, scene.test, ctx.match);

    TrialRecord &t = r.trials[i];
    t.index = i;
    t.seed = trial_seed(ctx.seed, i);
    t.group = to_string(d.shape);
    t.displacements = {d.shift, d.shift + diff};
    t.phi_ids = {"trial" + std::to_string(i) + "/reference", "trial" + std::to_string(i) + "/test"};
    t.statistic = phi_distance(ref, test, ctx.match.dedup_tol);
    t.threshold = th.value;
    t.variable = chebyshev_norm(diff);
    t.expected = t.variable < 1e-9;
    t.extra = {{"reference_pairs", ref.size()}, {"test_pairs", test.size()}};
    finalize(t);
  });

  const auto x = [](const TrialRecord &t) { return t.variable; };
  const auto associated = [](const TrialRecord &t) { return t.decision; };
  const auto correct = [](const TrialRecord &t) { return t.correct; };
  for (ShapeKind k : kAllShapes) {
    const std::string name = to_string(k);
    r.curves.push_back(rate_by_value("association_" + name, "per-axis displacement difference (max norm)",
                                     "P(associated)", r.trials,
                                     [name](const TrialRecord &t) { return t.group == name; }, x, associated));
  }
  r.curves.push_back(rate_by_value("accuracy", "per-axis displacement difference (max norm)", "P(correct)", r.trials,
                                   nullptr, x, correct));

  nlohmann::json shapes = nlohmann::json::object();
  for (ShapeKind k : kAllShapes) {
    const std::string name = to_string(k);
    std::size_t n0 = 0, a0 = 0, nm = 0, am = 0, n = 0, undefined = 0;
    for (const auto &t : r.trials) {
      if (t.group != name) continue;
      ++n;
      if (!t.statistic) ++undefined;
      if (t.variable < 1e-9) {
        ++n0;
        a0 += t.decision;
      }
      if (std::fabs(t.variable - opt.max_difference) < 1e-9) {
        ++nm;
        am += t.decision;
      }
    }
    auto rate = [](std::size_t k, std::size_t n) { return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0; };
    shapes[name] = {{"trials", n},
                    {"undefined", undefined},
                    {"trials_same", n0},
                    {"association_same", rate(a0, n0)},
                    {"trials_max_difference", nm},
                    {"association_max_difference", rate(am, nm)}};
  }
  std::size_t n_correct = 0;
  for (const auto &t : r.trials) n_correct += t.correct;
  r.summary["threshold"] = detail::threshold_json(th);
  r.summary["shapes"] = std::move(shapes);
  r.summary["accuracy"] = r.trials.empty() ? 0.0 : static_cast<double>(n_correct) / static_cast<double>(r.trials.size());

  auto &fig = out.figure;
  fig.title = "sensible rigid displacement";
  std::vector<Curve> assoc(r.curves.begin(), r.curves.begin() + static_cast<std::ptrdiff_t>(kAllShapes.size()));
  fig.panels.push_back(detail::curve_panel(assoc, "association vs displacement difference"));
  if (!r.trials.empty()) {
    CounterRng rng(trial_seed(ctx.seed, 0));
    const RigidDraw d = draw_rigid(rng, ctx, opt.shape);
    const PairedScene scene = rigid_scene(d, {});
    fig.panels.push_back(detail::phi_field_panel(learn_scene_phi(ctx.body, ctx.grid, scene.reference, ctx.match),
                                                 "reference phi, trial 0"));
  }
  return out;
}

}  // namespace smspace
