#include <algorithm>
#include <cmath>

#include "../phi/proprio_index.hpp"
#include "common.hpp"
#include "smspace/errors.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

MatchConfig demo1d_match_config(const Demo1DOptions &opt) {
  MatchConfig cfg;
  cfg.photo_tol = opt.photo_tol;
  // Below the proprioceptive spacing of neighbouring nodes, so dedup never
  // merges two different scan positions.
  cfg.dedup_tol = 0.002;
  cfg.policy = CoincidencePolicy::kUnambiguous;
  cfg.context_radius = opt.context_radius;
  return cfg;
}

double jitter_bound(const Agent1D &, const SmcTable &table, const PhiFunction &phi, double photo_tol) {
  const std::size_t n = table.size();
  if (n < 3 || phi.empty()) return 0.0;
  const double h = (table.layout().range.hi.x - table.layout().range.lo.x) / static_cast<double>(n - 1);
  double max_slope = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    max_slope = std::max(max_slope, Agent1D::proprio_slope(static_cast<double>(k) * h));
  }
  double min_ds = INFINITY;
  for (const auto &pr : phi.pairs) {
    const std::size_t k = std::clamp<std::size_t>(pr.domain_index, 1, n - 2);
    min_ds = std::min(min_ds, std::fabs(table[k + 1].s[0] - table[k - 1].s[0]) / (2 * h));
  }
  return max_slope * photo_tol / min_ds;
}

std::optional<double> sup_gap(const PhiFunction &a, const PhiFunction &b, double domain_tol) {
  const detail::ProprioIndex index = detail::domain_index(b);
  std::optional<double> gap;
  for (const auto &pa : a.pairs) {
    for (std::size_t i : index.near(pa.p, domain_tol)) {
      const double d = max_abs_diff(pa.p_image, b.pairs[i].p_image);
      gap = gap ? std::max(*gap, d) : d;
    }
  }
  return gap;
}

namespace {

Environment1D random_env_1d(CounterRng &rng, std::size_t n) {
  Environment1D env;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-0.2, 1.2);
    env.push_back({x, rng.uniform(0.5, 1.5)});
  }
  return env;
}

double node_shift(const Demo1DOptions &opt, double shift) {
  const double h = 1.0 / static_cast<double>(opt.n_nodes - 1);
  return std::round(shift / h) * h;
}

std::vector<Vec2> curve_of(const SmcTable &t) {
  std::vector<Vec2> pts;
  for (const auto &s : t.samples()) pts.push_back({s.p[0], s.s[0]});
  return pts;
}

std::vector<Vec2> phi_points(const PhiFunction &phi) {
  std::vector<Vec2> pts;
  for (const auto &pr : phi.pairs) pts.push_back({pr.p[0], pr.p_image[0]});
  return pts;
}

}  // namespace

ExperimentOutput run_1d_demo(std::uint64_t seed, const Demo1DOptions &opt, std::size_t threads) {
  opt.agent.validate();
  if (opt.n_nodes < 2 * opt.context_radius + 3) throw ConfigError("demo1d.n_nodes too small for the context radius");
  const MatchConfig cfg = demo1d_match_config(opt);
  cfg.validate();

  ExperimentOutput out;
  auto &r = out.report;
  r.experiment = "demo1d";
  r.seed = seed;
  r.config = {{"acuity", opt.agent.acuity},       {"n_nodes", opt.n_nodes},       {"n_lights", opt.n_lights},
              {"max_shift", opt.max_shift},       {"n_trials", opt.n_trials},     {"photo_tol", cfg.photo_tol},
              {"dedup_tol", cfg.dedup_tol},       {"context_radius", opt.context_radius},
              {"policy", to_string(cfg.policy)}};
  if (opt.fixed_shift) r.config["fixed_shift"] = *opt.fixed_shift;

  r.trials.resize(opt.n_trials);
  parallel_for(opt.n_trials, threads, [&](std::size_t i) {
    CounterRng rng(trial_seed(seed, i));
    const Environment1D ea = random_env_1d(rng, opt.n_lights);
    const Environment1D eb = random_env_1d(rng, opt.n_lights);
    const double shift = node_shift(opt, opt.fixed_shift ? *opt.fixed_shift : rng.uniform(-opt.max_shift, opt.max_shift));

    const SmcTable a0 = scan_1d(opt.agent, ea, opt.n_nodes);
    const SmcTable b0 = scan_1d(opt.agent, eb, opt.n_nodes);
    const PhiFunction pa = learn_phi(a0, scan_1d(opt.agent, shift_environment(ea, shift), opt.n_nodes), cfg);
    const PhiFunction pb = learn_phi(b0, scan_1d(opt.agent, shift_environment(eb, shift), opt.n_nodes), cfg);
    const double bound = 2.0 * std::max(jitter_bound(opt.agent, a0, pa, cfg.photo_tol),
                                        jitter_bound(opt.agent, b0, pb, cfg.photo_tol));

    TrialRecord &t = r.trials[i];
    t.index = i;
    t.seed = trial_seed(seed, i);
    t.displacements = {{shift, 0.0}};
    t.phi_ids = {"trial" + std::to_string(i) + "/a", "trial" + std::to_string(i) + "/b"};
    t.statistic = sup_gap(pa, pb, cfg.dedup_tol);
    t.threshold = bound;
    t.variable = shift;
    t.expected = true;
    t.extra = {{"pairs_a", pa.size()}, {"pairs_b", pb.size()}};
    finalize(t);
  });
  r.curves.push_back(rate_by_value("agreement", "shift", "P(gap <= 2 x jitter bound)", r.trials, nullptr,
                                   [](const TrialRecord &t) { return t.variable; },
                                   [](const TrialRecord &t) { return t.decision; }));

  // Reference panels from one environment.
  CounterRng rng(stream_seed(seed, detail::kValidationStream));
  const Environment1D env = random_env_1d(rng, opt.n_lights);
  const Environment1D other = random_env_1d(rng, opt.n_lights);
  const double shift = node_shift(opt, opt.fixed_shift ? *opt.fixed_shift : opt.max_shift / 2);
  const SmcTable before = scan_1d(opt.agent, env, opt.n_nodes);
  const SmcTable after = scan_1d(opt.agent, shift_environment(env, shift), opt.n_nodes);
  const PhiFunction phi = learn_phi(before, after, cfg);
  const PhiFunction phi_other =
      learn_phi(scan_1d(opt.agent, other, opt.n_nodes), scan_1d(opt.agent, shift_environment(other, shift), opt.n_nodes),
                cfg);
  const PhiFunction identity = learn_phi(before, before, cfg);
  double identity_error = 0.0;
  for (const auto &pr : identity.pairs) identity_error = std::max(identity_error, max_abs_diff(pr.p, pr.p_image));
  const PhiFunction beyond = learn_phi(before, scan_1d(opt.agent, shift_environment(env, 1.5), opt.n_nodes), cfg);

  std::size_t agree = 0;
  for (const auto &t : r.trials) agree += t.decision;
  r.summary["agreement_rate"] =
      r.trials.empty() ? 0.0 : static_cast<double>(agree) / static_cast<double>(r.trials.size());
  r.summary["example_shift"] = shift;
  r.summary["example_pairs"] = phi.size();
  r.summary["identity_pairs"] = identity.size();
  r.summary["identity_max_error"] = identity_error;
  r.summary["beyond_travel_pairs"] = beyond.size();
  nlohmann::json curve = nlohmann::json::array();
  for (const auto &pr : phi.pairs) curve.push_back({pr.p[0], pr.p_image[0]});
  r.summary["example_phi"] = std::move(curve);

  auto &fig = out.figure;
  fig.title = "one-dimensional agent";
  svg::Panel contingency;
  contingency.title = "contingency before and after the shift";
  contingency.x_label = "p";
  contingency.y_label = "s";
  contingency.line(curve_of(before), "before").line(curve_of(after), "after");
  std::vector<Vec2> matched;
  for (const auto &pr : phi.pairs) matched.push_back({pr.p[0], before[pr.domain_index].s[0]});
  contingency.scatter(std::move(matched), "matched", "#2ca02c");
  fig.panels.push_back(std::move(contingency));

  svg::Panel phis;
  phis.title = "phi from two environments";
  phis.x_label = "p";
  phis.y_label = "p'";
  phis.equal_aspect = true;
  phis.line({{0, 0}, {1, 1}}, "identity", "#999999");
  phis.scatter(phi_points(phi), "environment A").scatter(phi_points(phi_other), "environment B", "#d62728");
  fig.panels.push_back(std::move(phis));
  return out;
}

}  // namespace smspace
