#include <cmath>

#include "common.hpp"
#include "smspace/errors.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

std::size_t atlas_size(double jump_step, double jump_extent) {
  if (!(jump_step > 0.0) || !(jump_extent >= 0.0)) throw ConfigError("jump_step must be > 0 and jump_extent >= 0");
  const double ratio = jump_extent / jump_step;
  if (std::fabs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("jump_step must divide jump_extent evenly");
  }
  const auto n = static_cast<std::size_t>(std::llround(ratio)) + 1;
  return n * n;
}

std::optional<std::size_t> PhiAtlas::index_of(const Vec2 &jump) const {
  const double origin = static_cast<double>(per_axis / 2);
  const double fx = jump.x / step + origin;
  const double fy = jump.y / step + origin;
  const double ix = std::round(fx), iy = std::round(fy);
  if (std::fabs(fx - ix) > 1e-6 || std::fabs(fy - iy) > 1e-6) return std::nullopt;
  if (ix < 0 || iy < 0 || ix >= static_cast<double>(per_axis) || iy >= static_cast<double>(per_axis)) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(iy) * per_axis + static_cast<std::size_t>(ix);
}

PhiAtlas run_phi_atlas(const ExperimentContext &ctx, std::uint64_t env_seed, double jump_step, double jump_extent,
                       bool keep_phis) {
  ctx.validate();
  const std::size_t total = atlas_size(jump_step, jump_extent);
  PhiAtlas atlas;
  atlas.step = jump_step;
  atlas.extent = jump_extent;
  atlas.per_axis = static_cast<std::size_t>(std::llround(jump_extent / jump_step)) + 1;
  for (std::size_t iy = 0; iy < atlas.per_axis; ++iy) {
    for (std::size_t ix = 0; ix < atlas.per_axis; ++ix) {
      const auto at = [&](std::size_t i) {
        return jump_step * (static_cast<double>(i) - static_cast<double>(atlas.per_axis / 2));
      };
      atlas.jumps.push_back({at(ix), at(iy)});
    }
  }

  CounterRng rng(env_seed);
  const Environment env = detail::rich_environment(rng, ctx.body.retina_range().center());
  const SmcTable before = scan(env, ctx.body, {}, ctx.grid);

  atlas.sizes.assign(total, 0);
  if (keep_phis) atlas.phis.resize(total);
  parallel_for(total, ctx.threads, [&](std::size_t i) {
    const SmcTable after = scan(env, ctx.body, atlas.jumps[i], ctx.grid);
    PhiFunction phi = learn_phi(before, after, ctx.match);
    atlas.sizes[i] = phi.size();
    if (keep_phis) atlas.phis[i] = std::move(phi);
  });
  return atlas;
}

GroupLawCheck check_group_law(const PhiAtlas &atlas, const MatchConfig &cfg, double threshold, std::size_t threads,
                              std::vector<TrialRecord> *records) {
  const std::size_t n = atlas.phis.size();
  if (n != atlas.jumps.size()) throw ConfigError("group law check needs an atlas with its phi functions kept");
  std::vector<GroupLawCheck> counts(n);
  std::vector<std::vector<TrialRecord>> rows(n);
  parallel_for(n, threads, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto ab = atlas.index_of(atlas.jumps[a] + atlas.jumps[b]);
      if (!ab) continue;
      ++counts[a].pairs_tested;
      const PhiFunction composed = compose_phi(atlas.phis[b], atlas.phis[a], cfg);
      if (composed.empty()) continue;
      ++counts[a].nonempty;
      TrialRecord t;
      t.displacements = {atlas.jumps[a], atlas.jumps[b]};
      t.phi_ids = {"atlas/" + std::to_string(a), "atlas/" + std::to_string(b), "atlas/" + std::to_string(*ab)};
      t.statistic = phi_distance(composed, atlas.phis[*ab], cfg.dedup_tol);
      t.threshold = threshold;
      t.expected = true;
      t.variable = chebyshev_norm(atlas.jumps[a]) + chebyshev_norm(atlas.jumps[b]);
      t.extra = {{"composed_pairs", composed.size()}};
      finalize(t);
      if (t.decision) ++counts[a].within;
      if (records) rows[a].push_back(std::move(t));
    }
  });
  GroupLawCheck total;
  for (std::size_t a = 0; a < n; ++a) {
    total.pairs_tested += counts[a].pairs_tested;
    total.nonempty += counts[a].nonempty;
    total.within += counts[a].within;
    if (!records) continue;
    for (auto &t : rows[a]) {
      t.index = records->size();
      records->push_back(std::move(t));
    }
  }
  return total;
}

PhiThreshold calibrate_atlas(const ExperimentContext &ctx, const AtlasOptions &opt) {
  CalibrationOptions co;
  co.n_trials = opt.calibration_trials;
  co.seed = stream_seed(ctx.seed, detail::kCalibrationStream);
  co.threads = ctx.threads;
  co.quantile = ctx.quantile;
  co.displacement_size = ctx.calibration_size;
  return calibrate_threshold(ctx.body, ctx.grid,
                             rich_jump_generator({}, ctx.lattice_step, std::min(1.0, opt.jump_extent)), ctx.match, co);
}

ExperimentOutput atlas_experiment(const ExperimentContext &ctx, const AtlasOptions &opt) {
  const bool compose = opt.check_composition && opt.keep_phis;
  const PhiAtlas atlas = run_phi_atlas(ctx, stream_seed(ctx.seed, detail::kAtlasStream), opt.jump_step,
                                       opt.jump_extent, opt.keep_phis);

  ExperimentOutput out;
  auto &r = out.report;
  r.experiment = "atlas";
  r.seed = ctx.seed;
  r.config = detail::context_json(ctx);
  r.config["jump_step"] = opt.jump_step;
  r.config["jump_extent"] = opt.jump_extent;
  r.config["calibration_trials"] = opt.calibration_trials;
  r.config["check_composition"] = compose;

  nlohmann::json entries = nlohmann::json::array();
  std::size_t empty = 0;
  for (std::size_t i = 0; i < atlas.jumps.size(); ++i) {
    entries.push_back({{"jump", detail::vec_json(atlas.jumps[i])}, {"pairs", atlas.sizes[i]}});
    if (atlas.sizes[i] == 0) ++empty;
  }
  r.summary["phi_functions"] = atlas.jumps.size();
  r.summary["empty_phi_functions"] = empty;
  r.summary["atlas"] = std::move(entries);

  if (compose) {
    const PhiThreshold th = calibrate_atlas(ctx, opt);
    r.summary["threshold"] = detail::threshold_json(th);

    const GroupLawCheck law = check_group_law(atlas, ctx.match, th.value, ctx.threads, &r.trials);
    for (auto &t : r.trials) t.seed = ctx.seed;
    r.summary["group_law_lattice_pairs"] = law.pairs_tested;
    r.summary["group_law_nonempty"] = law.nonempty;
    r.summary["group_law_within"] = law.within;
    r.summary["group_law_rate"] = law.rate();
    r.curves.push_back(rate_by_value("group_law", "|a| + |b| (max norm)", "rho <= threshold", r.trials, nullptr,
                                     [](const TrialRecord &t) { return t.variable; },
                                     [](const TrialRecord &t) { return t.decision; }));
  }
  // Pair count against jump size.
  Curve sizes{"phi_size", "jump x", "pairs / grid nodes", {}};
  for (std::size_t i = 0; i < atlas.jumps.size(); ++i) {
    if (std::fabs(atlas.jumps[i].y) > 1e-9) continue;
    const double frac = static_cast<double>(atlas.sizes[i]) / static_cast<double>(ctx.grid.size());
    sizes.points.push_back({atlas.jumps[i].x, atlas.jumps[i].x, atlas.jumps[i].x, ctx.grid.size(), atlas.sizes[i],
                            frac, frac, frac});
  }
  r.curves.push_back(std::move(sizes));

  auto &fig = out.figure;
  fig.title = "phi atlas: " + std::to_string(atlas.jumps.size()) + " functions";
  if (opt.keep_phis) {
    for (const Vec2 &j : {Vec2{opt.jump_step, 0.0}, Vec2{0.0, opt.jump_step}, Vec2{opt.jump_step, opt.jump_step}}) {
      if (auto i = atlas.index_of(j)) {
        fig.panels.push_back(detail::phi_field_panel(atlas.phis[*i], "jump (" + detail::fmt(j.x, 2) + ", " +
                                                                         detail::fmt(j.y, 2) + ")"));
      }
    }
  }
  fig.panels.push_back(detail::curve_panel({r.curves.back()}, "phi size along the x axis"));
  if (compose) fig.panels.push_back(detail::curve_panel({r.curves.front()}, "composition vs direct phi"));
  return out;
}

}  // namespace smspace
