#include <cmath>
#include <cstdio>

#include "common.hpp"
#include "smspace/errors.hpp"

namespace smspace {

void ExperimentContext::validate() const {
  grid.validate();
  match.validate();
  const Vec2 spacing = grid.spacing(body.retina_range());
  if (!(lattice_step > 0.0)) throw ConfigError("lattice_step must be > 0");
  if (!(quantile > 0.0 && quantile <= 1.0)) throw ConfigError("quantile must be in (0, 1]");
  if (!(calibration_size >= 0.0)) throw ConfigError("calibration_size must be >= 0");
  for (double s : {spacing.x, spacing.y}) {
    const double ratio = lattice_step / s;
    if (std::fabs(ratio - std::round(ratio)) > 1e-6) {
      throw ConfigError("lattice_step must be a whole number of scan grid spacings");
    }
  }
}

ExperimentContext make_context(std::uint64_t seed, ScanGrid grid, std::size_t threads) {
  ExperimentContext ctx{make_default_body(CounterRng(seed).split(detail::kBodyStream)), grid, {}, seed, threads};
  ctx.match.policy = CoincidencePolicy::kUnambiguous;
  return ctx;
}

std::uint64_t stream_seed(std::uint64_t run_seed, std::uint64_t stream) {
  return CounterRng(run_seed).split(stream).next_u64();
}

PairedSceneGenerator rich_jump_generator(const Vec2 &jump, double lattice_step, double jump_range) {
  return [=](CounterRng &rng, const Vec2 &perturbation) {
    Vec2 j = jump;
    if (jump_range > 0.0) j = snap_to_lattice(uniform_in(rng, Box::centered({}, jump_range)), lattice_step);
    const Vec2 center = Box::unit().center() + 0.5 * j;
    const Environment e1 = detail::rich_environment(rng, center);
    const Environment e2 = detail::rich_environment(rng, center);
    const Vec2 jt = snap_to_lattice(j + perturbation, lattice_step);
    return PairedScene{{e1, e1, {}, j}, {e2, e2, {}, jt}};
  };
}

namespace detail {

Environment rich_environment(CounterRng &rng, const Vec2 &center) {
  return random_environment(rng, kRichSources, Box::centered(center, kRichSide));
}

nlohmann::json vec_json(const Vec2 &v) { return nlohmann::json::array({v.x, v.y}); }

nlohmann::json threshold_json(const PhiThreshold &th) {
  return {{"value", th.value},
          {"quantile", th.quantile},
          {"displacement_size", th.displacement_size},
          {"n_trials", th.n_trials},
          {"n_undefined", th.n_undefined}};
}

nlohmann::json context_json(const ExperimentContext &ctx) {
  nlohmann::json photo = nlohmann::json::array();
  for (const auto &r : ctx.body.photoreceptors()) photo.push_back({{"offset", vec_json(r.offset)}, {"acuity", r.acuity}});
  nlohmann::json proprio = nlohmann::json::array();
  for (const auto &r : ctx.body.proprioceptors()) {
    proprio.push_back({{"location", vec_json(r.location)}, {"acuity", r.acuity}});
  }
  return {{"seed", ctx.seed},
          {"grid", {ctx.grid.nx, ctx.grid.ny}},
          {"photo_tol", ctx.match.photo_tol},
          {"dedup_tol", ctx.match.dedup_tol},
          {"policy", to_string(ctx.match.policy)},
          {"lattice_step", ctx.lattice_step},
          {"quantile", ctx.quantile},
          {"calibration_size", ctx.calibration_size},
          {"body", {{"proprioceptors", proprio}, {"photoreceptors", photo}}}};
}

svg::Panel phi_field_panel(const PhiFunction &phi, std::string title, std::size_t max_arrows) {
  svg::Panel panel;
  panel.title = std::move(title);
  panel.x_label = "p_1";
  panel.y_label = "p_2";
  panel.equal_aspect = true;
  std::vector<Vec2> tails, heads;
  const std::size_t stride = std::max<std::size_t>(1, phi.size() / std::max<std::size_t>(1, max_arrows));
  for (std::size_t i = 0; i < phi.size(); i += stride) {
    const auto &pr = phi.pairs[i];
    if (pr.p.size() < 2) break;
    tails.push_back({pr.p[0], pr.p[1]});
    heads.push_back({pr.p_image[0], pr.p_image[1]});
  }
  panel.arrows(std::move(tails), std::move(heads));
  return panel;
}

svg::Panel curve_panel(const std::vector<Curve> &curves, std::string title) {
  svg::Panel panel;
  panel.title = std::move(title);
  if (!curves.empty()) {
    panel.x_label = curves.front().x_label;
    panel.y_label = curves.front().y_label;
  }
  panel.y_lo = 0.0;
  panel.y_hi = 1.0;
  for (const auto &c : curves) {
    std::vector<Vec2> pts;
    for (const auto &p : c.points) {
      if (p.n > 0) pts.push_back({p.x, p.rate});
    }
    if (pts.size() == 1) {
      panel.scatter(pts, c.name);
    } else {
      panel.line(pts, c.name);
    }
  }
  return panel;
}

std::string fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace detail
}  // namespace smspace
