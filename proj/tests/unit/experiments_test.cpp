#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "smspace/errors.hpp"
#include "smspace/experiments.hpp"
#include "smspace/oracle.hpp"

using namespace smspace;

namespace {

std::string dump(const ExperimentOutput &out) {
  std::ostringstream os;
  write_report_json(os, out.report);
  write_curves_csv(os, out.report);
  return os.str();
}

void expect_decisions_follow_threshold(const ExperimentReport &r) {
  for (const auto &t : r.trials) {
    EXPECT_EQ(t.decision, decide(t.statistic, t.threshold)) << r.experiment << " trial " << t.index;
    EXPECT_EQ(t.correct, t.decision == t.expected);
  }
}

}  // namespace

TEST(Shapes, StandardGeometry) {
  const std::pair<ShapeKind, std::size_t> want[] = {
      {ShapeKind::kCircle, 40}, {ShapeKind::kSquare, 40}, {ShapeKind::kTriangle, 39}, {ShapeKind::kStar, 40}};
  for (const auto &[kind, n] : want) {
    const ObjectShape s = standard_shape(kind);
    const auto pts = shape_points(s);
    EXPECT_EQ(pts.size(), n) << to_string(kind);
    EXPECT_EQ(shape_from_string(to_string(kind)), kind);
  }
  for (const Vec2 &p : shape_points(standard_shape(ShapeKind::kCircle))) EXPECT_NEAR(norm(p), 0.1, 1e-12);
  double longest = 0;
  for (const Vec2 &p : shape_points(standard_shape(ShapeKind::kStar))) longest = std::max(longest, norm(p));
  EXPECT_NEAR(longest, 0.3, 1e-12);
  for (const Vec2 &p : shape_points(standard_shape(ShapeKind::kSquare))) {
    EXPECT_NEAR(std::max(std::fabs(p.x), std::fabs(p.y)), 0.1, 1e-12);
  }
  EXPECT_THROW(shape_from_string("hexagon"), ConfigError);
}

TEST(Shapes, StretchActsOnXOnly) {
  const Environment e = make_object(standard_shape(ShapeKind::kCircle), {0.5, 0.5}, 1.5);
  double w = 0, h = 0;
  for (const auto &s : e.sources()) {
    w = std::max(w, std::fabs(s.position.x - 0.5));
    h = std::max(h, std::fabs(s.position.y - 0.5));
  }
  EXPECT_NEAR(w, 0.15, 1e-12);
  EXPECT_NEAR(h, 0.1, 1e-12);
}

TEST(Atlas, CountingRule) {
  EXPECT_EQ(atlas_size(0.02, 1.8), 8281u);
  EXPECT_EQ(atlas_size(0.2, 1.8), 100u);
  EXPECT_THROW(atlas_size(0.07, 1.8), ConfigError);
  EXPECT_THROW(atlas_size(0.0, 1.8), ConfigError);
}

TEST(Atlas, ZeroJumpIsIdentityAndCompositionHolds) {
  ExperimentContext ctx = make_context(5, {26, 26});
  ctx.lattice_step = 0.04;
  const PhiAtlas atlas = run_phi_atlas(ctx, 77, 0.4, 0.8);
  ASSERT_EQ(atlas.phis.size(), 9u);
  const auto zero = atlas.index_of({0, 0});
  ASSERT_TRUE(zero.has_value());
  ASSERT_FALSE(atlas.phis[*zero].empty());
  for (const auto &pr : atlas.phis[*zero].pairs) EXPECT_EQ(pr.p, pr.p_image);
  EXPECT_FALSE(atlas.index_of({0.2, 0}).has_value());
  EXPECT_FALSE(atlas.index_of({0.8, 0}).has_value());

  const GroupLawCheck law = check_group_law(atlas, ctx.match, 0.0);
  EXPECT_GT(law.pairs_tested, 0u);
  EXPECT_GT(law.nonempty, 0u);
  EXPECT_GE(law.rate(), 0.95);
}

TEST(Rigid, IdenticalScenesGiveZeroDistance) {
  const ExperimentContext ctx = make_context(8);
  CounterRng rng(1);
  const Environment env = random_environment(rng, 200, Box::centered({0.5, 0.5}, 3.0));
  const Scene s{env, env, {0, 0}, {0.1, -0.2}};
  const PhiFunction a = learn_scene_phi(ctx.body, ctx.grid, s, ctx.match);
  const PhiFunction b = learn_scene_phi(ctx.body, ctx.grid, s, ctx.match);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(phi_distance(a, b, ctx.match.dedup_tol), 0.0);
}

TEST(Rigid, SameDisplacementAssociatesAndDeterministic) {
  ExperimentContext ctx = make_context(8);
  RigidOptions opt;
  opt.n_trials = 12;
  opt.calibration_trials = 20;
  opt.fixed_difference = Vec2{0, 0};
  const ExperimentOutput one = run_rigid_displacement(ctx, opt);
  EXPECT_EQ(one.report.trials.size(), 12u);
  expect_decisions_follow_threshold(one.report);
  std::size_t same = 0;
  for (const auto &t : one.report.trials) same += t.decision;
  EXPECT_GE(same, 10u);
  ctx.threads = 2;
  EXPECT_EQ(dump(one), dump(run_rigid_displacement(ctx, opt)));

  opt.fixed_difference = Vec2{0.1, 0.1};
  const ExperimentOutput far = run_rigid_displacement(ctx, opt);
  for (const auto &t : far.report.trials) EXPECT_FALSE(t.decision);
}

TEST(Medium, UnchangedSceneFitsExactly) {
  const ExperimentContext ctx = make_context(3);
  const Environment circle = make_object(standard_shape(ShapeKind::kCircle), {0.5, 0.5});
  const SmcTable t = scan(circle, ctx.body, {0, 0}, ctx.grid);
  const PhiFunction id = learn_phi(t, t, ctx.match);
  ASSERT_FALSE(id.empty());
  EXPECT_EQ(fit_error(id, t, t, ctx.match.dedup_tol), 0.0);
}

TEST(Medium, SmallRunDecidesByThreshold) {
  const ExperimentContext ctx = make_context(3);
  MediumOptions opt;
  opt.n_trials = 10;
  opt.calibration_trials = 20;
  opt.validation_trials = 0;
  opt.fixed_deformation = 0.5;
  const ExperimentOutput out = run_unchanging_medium(ctx, opt);
  EXPECT_EQ(out.report.trials.size(), 10u);
  expect_decisions_follow_threshold(out.report);
  for (const auto &t : out.report.trials) EXPECT_FALSE(t.expected);
  EXPECT_GE(out.report.summary["accuracy"]["rate"].get<double>(), 0.9);
}

TEST(Relpos, ExactPathsAssociate) {
  const ExperimentContext ctx = make_context(4);
  RelposOptions opt;
  opt.n_trials = 10;
  opt.calibration_trials = 20;
  opt.segments = {2};
  opt.fixed_offset = 0.0;
  const ExperimentOutput out = run_relative_position(ctx, opt);
  EXPECT_EQ(out.report.trials.size(), 10u);
  expect_decisions_follow_threshold(out.report);
  std::size_t same = 0;
  for (const auto &t : out.report.trials) {
    same += t.decision;
    ASSERT_EQ(t.displacements.size(), 2u);
    const Vec2 sum = t.displacements[0] + t.displacements[1];
    EXPECT_NEAR(sum.x, 0.6, 1e-9);
    EXPECT_NEAR(sum.y, 0.6, 1e-9);
  }
  EXPECT_GE(same, 7u);
}

TEST(Demo1D, LearnedPhiMatchesOracle) {
  const Demo1DOptions opt;
  const MatchConfig cfg = demo1d_match_config(opt);
  CounterRng rng(21);
  Environment1D env;
  for (int i = 0; i < 10; ++i) env.push_back({rng.uniform(-0.2, 1.2), rng.uniform(0.5, 1.5)});
  for (double d : {0.0, 0.05, -0.1, 0.2}) {
    const PhiFunction phi =
        learn_phi(scan_1d(opt.agent, env, opt.n_nodes), scan_1d(opt.agent, shift_environment(env, d), opt.n_nodes), cfg);
    ASSERT_FALSE(phi.empty()) << d;
    const auto cmp = oracle::compare_with_oracle(phi, oracle::oracle_phi_1d(opt.n_nodes, d), 1e-9);
    EXPECT_EQ(cmp.unmatched, 0u) << d;
    EXPECT_LE(cmp.max_discrepancy, jitter_bound(opt.agent, scan_1d(opt.agent, env, opt.n_nodes), phi, opt.photo_tol))
        << d;
  }
}

TEST(Demo1D, Run) {
  const ExperimentOutput out = run_1d_demo(6, Demo1DOptions{});
  EXPECT_EQ(out.report.trials.size(), 20u);
  expect_decisions_follow_threshold(out.report);
  EXPECT_EQ(out.report.summary["identity_max_error"].get<double>(), 0.0);
  EXPECT_EQ(out.report.summary["beyond_travel_pairs"].get<std::size_t>(), 0u);
  EXPECT_GE(out.report.summary["agreement_rate"].get<double>(), 0.9);
  EXPECT_EQ(dump(out), dump(run_1d_demo(6, Demo1DOptions{}, 2)));
}

TEST(Context, LatticeMustFitGrid) {
  ExperimentContext ctx = make_context(1);
  EXPECT_NO_THROW(ctx.validate());
  ctx.lattice_step = 0.03;
  EXPECT_THROW(ctx.validate(), ConfigError);
  ctx.lattice_step = 0.02;
  ctx.quantile = 1.5;
  EXPECT_THROW(ctx.validate(), ConfigError);
}
