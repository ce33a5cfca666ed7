#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "../phi/proprio_index.hpp"
#include "common.hpp"
#include "smspace/errors.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

namespace {

using NodePairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Scan-node indices of the pairs of a phi, found by looking its proprioception
// up in the agent's own scan.
NodePairs node_pairs(const PhiFunction &phi, const detail::ProprioIndex &grid_index, double tol) {
  NodePairs out;
  out.reserve(phi.size());
  for (const auto &pr : phi.pairs) {
    const auto k = grid_index.near(pr.p, tol);
    const auto kk = grid_index.near(pr.p_image, tol);
    if (k.empty() || kk.empty()) continue;
    out.emplace_back(static_cast<std::uint32_t>(k.front()), static_cast<std::uint32_t>(kk.front()));
  }
  return out;
}

double photo_gap(const PhotoVector &a, const PhotoVector &b) { return euclidean_distance(a, b); }

// Sum of photo gaps, abandoned once it exceeds `bound`.
double fit_error_bounded(const NodePairs &pairs, const SmcTable &before, const SmcTable &after, double bound) {
  double eps = 0.0;
  for (const auto &[k, kk] : pairs) {
    eps += photo_gap(before[k].s, after[kk].s);
    if (eps > bound) return eps;
  }
  return eps;
}

detail::ProprioIndex scan_index(const SmcTable &table) {
  std::vector<const ProprioVector *> pts;
  pts.reserve(table.size());
  for (const auto &s : table.samples()) pts.push_back(&s.p);
  return detail::ProprioIndex(std::move(pts));
}

struct Candidates {
  std::vector<Vec2> jumps;
  std::vector<NodePairs> pairs;
};

// One candidate per lattice jump within the jump region, learned in a rich
// environment.
Candidates build_candidates(const ExperimentContext &ctx, const MediumOptions &opt, const SmcTable &reference_scan) {
  const std::uint64_t env_seed = stream_seed(ctx.seed, detail::kAtlasStream);
  CounterRng rng(env_seed);
  const Environment env = detail::rich_environment(rng, ctx.body.retina_range().center());
  const SmcTable before = scan(env, ctx.body, {}, ctx.grid);
  const detail::ProprioIndex index = scan_index(reference_scan);

  const std::size_t total = atlas_size(ctx.lattice_step, opt.jump_region);
  const auto per_axis = static_cast<std::size_t>(std::llround(opt.jump_region / ctx.lattice_step)) + 1;
  Candidates c;
  c.pairs.resize(total);
  for (std::size_t iy = 0; iy < per_axis; ++iy) {
    for (std::size_t ix = 0; ix < per_axis; ++ix) {
      c.jumps.push_back({-opt.jump_region / 2 + ctx.lattice_step * static_cast<double>(ix),
                         -opt.jump_region / 2 + ctx.lattice_step * static_cast<double>(iy)});
    }
  }
  parallel_for(total, ctx.threads, [&](std::size_t i) {
    const PhiFunction phi = learn_phi(before, scan(env, ctx.body, c.jumps[i], ctx.grid), ctx.match);
    c.pairs[i] = node_pairs(phi, index, ctx.match.dedup_tol);
  });
  return c;
}

struct MediumDraw {
  Vec2 center;
  Vec2 jump;
  double deformation = 0.0;
};

MediumDraw draw_medium(CounterRng &rng, const ExperimentContext &ctx, const MediumOptions &opt,
                       const std::optional<double> &deformation, double small) {
  const Box view = ctx.body.retina_range();
  const double radius = standard_shape(ShapeKind::kCircle).size;
  MediumDraw d;
  d.center = uniform_in(rng, Box::centered(view.center(), opt.circle_region));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    d.jump = snap_to_lattice(uniform_in(rng, Box::centered({}, opt.jump_region)), ctx.lattice_step);
    if (deformation) {
      d.deformation = *deformation;
    } else if (small > 0.0) {
      d.deformation = rng.uniform(-small, small);
    } else {
      d.deformation = rng.uniform(-opt.max_deformation, opt.max_deformation);
    }
    // The whole deformed circle must fall inside the view after the jump.
    const double half_x = radius * (1.0 + d.deformation);
    const Box seen{view.lo + d.jump, view.hi + d.jump};
    if (seen.contains(d.center - Vec2{half_x, radius}) && seen.contains(d.center + Vec2{half_x, radius})) return d;
  }
  throw ConfigError("medium: no jump keeps the circle in view; check circle_region and jump_region");
}

struct MediumEval {
  std::optional<double> epsilon;
  std::size_t best = 0;
  double visual_deformed = 0.0;
  double visual_undeformed = 0.0;
};

MediumEval evaluate(const ExperimentContext &ctx, const Candidates &cand, const MediumDraw &d) {
  const ObjectShape circle = standard_shape(ShapeKind::kCircle);
  const SmcTable before = scan(make_object(circle, d.center), ctx.body, {}, ctx.grid);
  const SmcTable after = scan(make_object(circle, d.center, 1.0 + d.deformation), ctx.body, d.jump, ctx.grid);
  const SmcTable plain = scan(make_object(circle, d.center), ctx.body, d.jump, ctx.grid);

  MediumEval e;
  double best = INFINITY;
  for (std::size_t i = 0; i < cand.pairs.size(); ++i) {
    if (cand.pairs[i].empty()) continue;
    const double eps = fit_error_bounded(cand.pairs[i], before, after, best);
    if (eps < best) {
      best = eps;
      e.best = i;
    }
  }
  if (std::isfinite(best)) e.epsilon = best;
  for (std::size_t k = 0; k < before.size(); ++k) {
    e.visual_deformed += photo_gap(before[k].s, after[k].s);
    e.visual_undeformed += photo_gap(before[k].s, plain[k].s);
  }
  return e;
}

}  // namespace

std::optional<double> fit_error(const PhiFunction &phi, const SmcTable &before, const SmcTable &after,
                                double proprio_tol) {
  const NodePairs pairs = node_pairs(phi, scan_index(before), proprio_tol);
  if (pairs.empty()) return std::nullopt;
  return fit_error_bounded(pairs, before, after, INFINITY);
}

ExperimentOutput run_unchanging_medium(const ExperimentContext &ctx, const MediumOptions &opt) {
  ctx.validate();
  if (opt.jump_bins == 0) throw ConfigError("medium.jump_bins must be >= 1");
  const SmcTable grid_scan = scan(Environment{}, ctx.body, {}, ctx.grid);
  const Candidates cand = build_candidates(ctx, opt, grid_scan);

  auto run_batch = [&](std::uint64_t seed, std::size_t n, std::optional<double> fixed, double small) {
    std::vector<std::pair<MediumDraw, MediumEval>> out(n);
    parallel_for(n, ctx.threads, [&](std::size_t i) {
      CounterRng rng(trial_seed(seed, i));
      const MediumDraw d = draw_medium(rng, ctx, opt, fixed, small);
      out[i] = {d, evaluate(ctx, cand, d)};
    });
    return out;
  };

  // Threshold: the given fraction of near-zero deformations must be called
  // unchanged.
  PhiThreshold th;
  th.quantile = ctx.quantile;
  th.displacement_size = opt.small_deformation;
  if (opt.epsilon_threshold) {
    th.value = *opt.epsilon_threshold;
  } else {
    if (opt.calibration_trials < 20) throw ConfigError("medium.calibration_trials must be >= 20");
    const auto cal = run_batch(stream_seed(ctx.seed, detail::kCalibrationStream), opt.calibration_trials,
                               std::nullopt, opt.small_deformation);
    std::vector<double> eps;
    for (const auto &[d, e] : cal) {
      if (e.epsilon) eps.push_back(*e.epsilon);
    }
    th.n_trials = cal.size();
    th.n_undefined = cal.size() - eps.size();
    if (2 * th.n_undefined > th.n_trials) throw CalibrationError("medium: most calibration trials had no fit");
    th.value = coverage_quantile(std::move(eps), cal.size(), th.quantile);
  }

  std::size_t validation_unchanged = 0;
  if (opt.validation_trials > 0) {
    const auto val = run_batch(stream_seed(ctx.seed, detail::kValidationStream), opt.validation_trials, std::nullopt,
                               opt.small_deformation);
    for (const auto &[d, e] : val) validation_unchanged += decide(e.epsilon, th.value);
  }

  ExperimentOutput out;
  auto &r = out.report;
  r.experiment = "medium";
  r.seed = ctx.seed;
  r.config = detail::context_json(ctx);
  r.config["n_trials"] = opt.n_trials;
  r.config["calibration_trials"] = opt.calibration_trials;
  r.config["validation_trials"] = opt.validation_trials;
  r.config["max_deformation"] = opt.max_deformation;
  r.config["small_deformation"] = opt.small_deformation;
  r.config["circle_region"] = opt.circle_region;
  r.config["jump_region"] = opt.jump_region;
  r.config["candidates"] = cand.jumps.size();
  if (opt.fixed_deformation) r.config["fixed_deformation"] = *opt.fixed_deformation;

  const auto trials = run_batch(ctx.seed, opt.n_trials, opt.fixed_deformation, 0.0);
  r.trials.resize(trials.size());
  std::size_t changed = 0, confound = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto &[d, e] = trials[i];
    TrialRecord &t = r.trials[i];
    t.index = i;
    t.seed = trial_seed(ctx.seed, i);
    t.displacements = {d.jump};
    t.phi_ids = {"candidate/" + std::to_string(e.best)};
    t.statistic = e.epsilon;
    t.threshold = th.value;
    t.variable = std::fabs(d.deformation);
    t.expected = t.variable < opt.small_deformation;
    const bool similar = e.visual_deformed < e.visual_undeformed;
    t.extra = {{"deformation", d.deformation},
               {"circle_center", detail::vec_json(d.center)},
               {"best_jump", detail::vec_json(cand.jumps[e.best])},
               {"visual_distance_deformed", e.visual_deformed},
               {"visual_distance_undeformed", e.visual_undeformed}};
    finalize(t);
    if (!t.expected) {
      ++changed;
      confound += similar;
    }
  }

  const auto correct = [](const TrialRecord &t) { return t.correct; };
  const auto unchanged = [](const TrialRecord &t) { return t.decision; };
  const auto deformation = [](const TrialRecord &t) { return t.variable; };
  const auto jump = [](const TrialRecord &t) { return chebyshev_norm(t.displacements.front()); };
  const std::vector<double> def_edges{0.0, 0.005, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> jump_edges;
  for (std::size_t b = 0; b <= opt.jump_bins; ++b) {
    jump_edges.push_back(opt.jump_region / 2 * static_cast<double>(b) / static_cast<double>(opt.jump_bins));
  }
  r.curves.push_back(binned_rate("accuracy_vs_deformation", "|deformation|", "P(correct)", r.trials, nullptr,
                                 deformation, correct, def_edges));
  r.curves.push_back(binned_rate("unchanged_vs_deformation", "|deformation|", "P(judged unchanged)", r.trials,
                                 nullptr, deformation, unchanged, def_edges));
  r.curves.push_back(binned_rate("accuracy_vs_jump", "jump size (max norm)", "P(correct)", r.trials, nullptr, jump,
                                 correct, jump_edges));

  auto rate_where = [&](auto pred) {
    std::size_t n = 0, k = 0;
    for (const auto &t : r.trials) {
      if (!pred(t)) continue;
      ++n;
      k += t.correct;
    }
    return nlohmann::json{{"trials", n}, {"rate", n ? static_cast<double>(k) / static_cast<double>(n) : 0.0}};
  };
  r.summary["threshold"] = detail::threshold_json(th);
  r.summary["validation_trials"] = opt.validation_trials;
  r.summary["validation_unchanged_rate"] =
      opt.validation_trials ? static_cast<double>(validation_unchanged) / static_cast<double>(opt.validation_trials)
                            : 0.0;
  r.summary["accuracy_large_deformation"] = rate_where([](const TrialRecord &t) { return t.variable >= 0.2; });
  r.summary["accuracy_small_deformation"] = rate_where([](const TrialRecord &t) { return t.variable <= 0.01; });
  r.summary["accuracy"] = rate_where([](const TrialRecord &) { return true; });
  double lo = 1.0, hi = 0.0;
  for (const auto &p : r.curves.back().points) {
    if (p.n == 0) continue;
    lo = std::min(lo, p.rate);
    hi = std::max(hi, p.rate);
  }
  r.summary["jump_bin_spread"] = hi >= lo ? hi - lo : 0.0;
  r.summary["changed_trials"] = changed;
  r.summary["visual_confound_rate"] = changed ? static_cast<double>(confound) / static_cast<double>(changed) : 0.0;

  auto &fig = out.figure;
  fig.title = "unchanging medium";
  fig.panels.push_back(detail::curve_panel({r.curves[0], r.curves[1]}, "decisions vs deformation"));
  fig.panels.push_back(detail::curve_panel({r.curves[2]}, "accuracy vs jump size"));
  if (!trials.empty()) {
    const auto &d = trials.front().first;
    const ObjectShape circle = standard_shape(ShapeKind::kCircle);
    auto heat = [&](const SmcTable &t, const std::string &title) {
      svg::Heatmap h{ctx.grid.nx, ctx.grid.ny, ctx.body.retina_range(), {}};
      for (const auto &s : t.samples()) {
        double sum = 0.0;
        for (double v : s.s.values) sum += v;
        h.values.push_back(sum);
      }
      svg::Panel p;
      p.title = title;
      p.x_label = "scan x";
      p.y_label = "scan y";
      p.equal_aspect = true;
      p.heatmap(std::move(h));
      return p;
    };
    fig.panels.push_back(heat(scan(make_object(circle, d.center), ctx.body, {}, ctx.grid), "trial 0 before"));
    fig.panels.push_back(heat(scan(make_object(circle, d.center, 1.0 + d.deformation), ctx.body, d.jump, ctx.grid),
                              "trial 0 after (deformation " + detail::fmt(d.deformation, 2) + ")"));
  }
  return out;
}

}  // namespace smspace
