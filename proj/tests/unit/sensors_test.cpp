#include <gtest/gtest.h>

#include <sstream>

#include "smspace/agent1d.hpp"
#include "smspace/errors.hpp"
#include "smspace/oracle.hpp"
#include "smspace/sensors.hpp"

using namespace smspace;

namespace {

Environment random_env(CounterRng &rng, std::size_t n, double extent) {
  std::vector<LightSource> src;
  for (std::size_t i = 0; i < n; ++i) {
    src.push_back({{rng.uniform(-extent, extent), rng.uniform(-extent, extent)}, rng.uniform(0.5, 1.5)});
  }
  return Environment(std::move(src));
}

AgentBody one_receptor_body(Vec2 proprio_at, double sigma, Vec2 photo_offset = {}) {
  return AgentBody({{proprio_at, sigma}}, {{photo_offset, 0.1}});
}

}  // namespace

TEST(Proprio, PeakAndOneWidth) {
  const auto body = one_receptor_body({0.5, 0.5}, 0.3);
  EXPECT_DOUBLE_EQ(proprio_response(body, {0.5, 0.5})[0], 1.0);
  EXPECT_NEAR(proprio_response(body, {0.8, 0.5})[0], std::exp(-1.0), 1e-15);
}

TEST(Proprio, OutsideRangeThrows) {
  const auto body = make_default_body(CounterRng(1));
  EXPECT_THROW(proprio_response(body, {1.01, 0.5}), RangeError);
  EXPECT_THROW(proprio_response(body, {0.5, -0.2}), RangeError);
  EXPECT_THROW(photo_response(Environment{}, body, {}, {2.0, 0.0}), RangeError);
}

TEST(Proprio, DefaultBodyShape) {
  const auto body = make_default_body(CounterRng(1));
  ASSERT_EQ(body.proprioceptors().size(), 8u);
  ASSERT_EQ(body.photoreceptors().size(), 9u);
  EXPECT_EQ(body.retina_range(), Box::unit());
  for (const auto &p : body.proprioceptors()) EXPECT_EQ(p.acuity, 0.3);
  for (const auto &r : body.photoreceptors()) {
    EXPECT_GE(r.acuity, 0.03);
    EXPECT_LE(r.acuity, 0.3);
    EXPECT_LE(std::fabs(r.offset.x), 0.15);
    EXPECT_LE(std::fabs(r.offset.y), 0.15);
  }
  const auto p = proprio_response(body, {0.3, 0.7});
  for (double v : p.values) {
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Proprio, InjectiveOnDeskGrid) {
  const auto body = make_default_body(CounterRng(1));
  const auto nodes = grid_nodes(ScanGrid{51, 51}, body.retina_range());
  std::vector<ProprioVector> ps;
  for (const auto &x : nodes) ps.push_back(proprio_response(body, x));
  double closest = INFINITY;
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = a + 1; b < ps.size(); ++b) closest = std::min(closest, max_abs_diff(ps[a], ps[b]));
  }
  EXPECT_GE(closest, 0.01);
}

TEST(Body, RejectsBadSpecs) {
  EXPECT_THROW(AgentBody({}, {{{0, 0}, 0.1}}), ConfigError);
  EXPECT_THROW(AgentBody({{{0, 0}, 0.3}}, {}), ConfigError);
  EXPECT_THROW(AgentBody({{{0, 0}, 0.0}}, {{{0, 0}, 0.1}}), ConfigError);
  EXPECT_THROW(AgentBody({{{0, 0}, 0.3}}, {{{0, 0}, -0.1}}), ConfigError);
}

TEST(Photo, EmptyEnvironmentIsDark) {
  const auto body = make_default_body(CounterRng(2));
  for (double v : photo_response(Environment{}, body, {}, {0.5, 0.5}).values) EXPECT_EQ(v, 0.0);
}

TEST(Photo, SourceOnTopOfReceptor) {
  const auto body = one_receptor_body({0.5, 0.5}, 0.3, {0.05, -0.02});
  const Environment env({{{1.0 + 0.3 + 0.05, 2.0 + 0.4 - 0.02}, 2.0}});
  EXPECT_DOUBLE_EQ(photo_response(env, body, {1.0, 2.0}, {0.3, 0.4})[0], 2.0);
}

TEST(Photo, LinearInSources) {
  CounterRng rng(4);
  const auto body = make_default_body(CounterRng(2));
  const Environment a = random_env(rng, 5, 2.0), b = random_env(rng, 7, 2.0);
  const auto sa = photo_response(a, body, {0.1, 0.2}, {0.4, 0.6});
  const auto sb = photo_response(b, body, {0.1, 0.2}, {0.4, 0.6});
  const auto sab = photo_response(merge(a, b), body, {0.1, 0.2}, {0.4, 0.6});
  for (std::size_t j = 0; j < sab.size(); ++j) EXPECT_NEAR(sab[j], sa[j] + sb[j], 1e-13);
}

TEST(Photo, JointTranslationLeavesOutputUnchanged) {
  CounterRng rng(8);
  const auto body = make_default_body(CounterRng(3));
  for (int i = 0; i < 200; ++i) {
    const Environment env = random_env(rng, 20, 2.0);
    const Vec2 agent{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Vec2 retina{rng.uniform(), rng.uniform()};
    const RigidDisplacement d{{rng.uniform(-3, 3), rng.uniform(-3, 3)}};
    const auto s0 = photo_response(env, body, agent, retina);
    const auto s1 = photo_response(displace_environment(env, d), body, agent + d.delta, retina);
    for (std::size_t j = 0; j < s0.size(); ++j) EXPECT_NEAR(s0[j], s1[j], 1e-12);
  }
}

TEST(Scan, CountsAndRowMajorOrder) {
  const auto body = make_default_body(CounterRng(5));
  const SmcTable t = scan(Environment{}, body, {}, ScanGrid{2, 2});
  ASSERT_EQ(t.size(), 4u);
  const auto truth = oracle::TruthView::positions(t);
  EXPECT_EQ(truth[1], (Vec2{1.0, 0.0}));
  EXPECT_EQ(truth[2], (Vec2{0.0, 1.0}));
  EXPECT_EQ(ScanGrid{}.size(), 40401u);
  EXPECT_THROW(scan(Environment{}, body, {}, ScanGrid{1, 5}), ConfigError);
}

TEST(Scan, MatchesPointwiseResponseAndIsDeterministic) {
  CounterRng rng(6);
  const auto body = make_default_body(CounterRng(5));
  const Environment env = random_env(rng, 200, 1.5);
  const Vec2 agent{-0.3, 0.2};
  const SmcTable t = scan(env, body, agent, ScanGrid{21, 17});
  const auto truth = oracle::TruthView::positions(t);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_EQ(t[k].p, proprio_response(body, truth[k]));
    const auto s = photo_response(env, body, agent, truth[k]);
    for (std::size_t j = 0; j < s.size(); ++j) EXPECT_NEAR(t[k].s[j], s[j], 1e-12);
  }
  const SmcTable again = scan(env, body, agent, ScanGrid{21, 17});
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_EQ(t[k].s, again[k].s);
}

TEST(Scan, CsvHasHeaderAndOneRowPerNode) {
  const auto body = make_default_body(CounterRng(5));
  std::ostringstream os;
  write_smc_csv(os, scan(Environment({{{0.5, 0.5}, 1.0}}), body, {}, ScanGrid{3, 3}));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("p_1,", 0), 0u);
  EXPECT_NE(line.find("p_8,s_1"), std::string::npos);
  EXPECT_NE(line.find("s_9"), std::string::npos);
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST(Agent1D, MapIsMonotoneAndInvertible) {
  double prev = -1;
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    const double p = Agent1D::proprio(x);
    EXPECT_GT(p, prev);
    EXPECT_NEAR(Agent1D::proprio_inverse(p), x, 1e-12);
    const double h = 1e-6;
    EXPECT_NEAR(Agent1D::proprio_slope(x), (Agent1D::proprio(x + h) - Agent1D::proprio(x - h)) / (2 * h), 1e-6);
    prev = p;
  }
  EXPECT_NEAR(Agent1D::proprio(0.0), 0.0, 1e-15);
  EXPECT_NEAR(Agent1D::proprio(1.0), 1.0, 1e-15);
}

TEST(Agent1D, ScanBasics) {
  const Agent1D agent;
  const SmcTable dark = scan_1d(agent, {}, 101);
  ASSERT_EQ(dark.size(), 101u);
  for (std::size_t k = 0; k < dark.size(); ++k) {
    EXPECT_EQ(dark[k].s[0], 0.0);
    if (k > 0) EXPECT_GT(dark[k].p[0], dark[k - 1].p[0]);
  }
  EXPECT_THROW(scan_1d(agent, {}, 1), ConfigError);
}

TEST(Agent1D, ShiftedEnvironmentMatchesOnSharedPositions) {
  const Agent1D agent;
  CounterRng rng(12);
  Environment1D env;
  for (int i = 0; i < 12; ++i) env.push_back({rng.uniform(-0.2, 1.2), rng.uniform(0.5, 1.5)});
  // A shift of 0.2 is 20 nodes at 101 nodes.
  const double delta = 0.2;
  const SmcTable a = scan_1d(agent, env, 101);
  const SmcTable b = scan_1d(agent, shift_environment(env, delta), 101);
  const auto xa = oracle::TruthView::positions(a);
  const auto xb = oracle::TruthView::positions(b);
  int compared = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t kk = 0; kk < b.size(); ++kk) {
      if (std::fabs(xb[kk].x - (xa[k].x + delta)) < 1e-9) {
        EXPECT_NEAR(b[kk].s[0], a[k].s[0], 1e-9);
        ++compared;
      }
    }
  }
  EXPECT_EQ(compared, 81);
}
