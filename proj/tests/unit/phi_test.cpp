#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "smspace/calibration.hpp"
#include "smspace/errors.hpp"
#include "smspace/oracle.hpp"

using namespace smspace;

namespace {

Environment random_env(CounterRng &rng, std::size_t n, Box box) {
  std::vector<LightSource> src;
  for (std::size_t i = 0; i < n; ++i) {
    src.push_back({{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)}, rng.uniform(0.5, 1.5)});
  }
  return Environment(std::move(src));
}

// 200 sources in the 3x3 square around the view of an agent at the origin.
Environment rich_env(std::uint64_t seed) {
  CounterRng rng(seed);
  return random_env(rng, 200, Box::centered({0.5, 0.5}, 3.0));
}

const AgentBody &body() {
  static const AgentBody b = make_default_body(CounterRng(2024));
  return b;
}

constexpr ScanGrid kDesk{51, 51};

}  // namespace

TEST(MatchConfig, Validation) {
  MatchConfig cfg;
  EXPECT_EQ(cfg.photo_tol, 0.005);
  EXPECT_EQ(cfg.dedup_tol, 0.01);
  EXPECT_NO_THROW(cfg.validate());
  cfg.photo_tol = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.dedup_tol = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_EQ(coincidence_policy_from_string("unambiguous"), CoincidencePolicy::kUnambiguous);
  EXPECT_THROW(coincidence_policy_from_string("some"), ConfigError);
}

TEST(LearnPhi, ZeroDisplacementIsIdentity) {
  const SmcTable t = scan(rich_env(1), body(), {}, kDesk);
  const PhiFunction phi = learn_phi(t, t, {});
  ASSERT_EQ(phi.size(), t.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    EXPECT_EQ(phi.pairs[k].domain_index, k);
    EXPECT_EQ(phi.pairs[k].image_index, k);
    EXPECT_EQ(phi.pairs[k].p, phi.pairs[k].p_image);
  }
}

TEST(LearnPhi, NoOverlapGivesEmpty) {
  const Environment env = rich_env(2);
  const SmcTable a = scan(env, body(), {}, kDesk);
  const SmcTable b = scan(displace_environment(env, {{5, 5}}), body(), {}, kDesk);
  MatchConfig cfg;
  cfg.policy = CoincidencePolicy::kUnambiguous;
  EXPECT_TRUE(learn_phi(a, b, cfg).empty());
}

TEST(LearnPhi, MismatchedBodiesRejected) {
  const AgentBody small({{{0.5, 0.5}, 0.3}}, {{{0, 0}, 0.1}});
  const SmcTable a = scan(Environment{}, body(), {}, ScanGrid{3, 3});
  const SmcTable b = scan(Environment{}, small, {}, ScanGrid{3, 3});
  EXPECT_THROW(learn_phi(a, b, {}), ConfigError);
}

TEST(LearnPhi, AgreesWithOracleForLatticeJump) {
  const Environment env = rich_env(3);
  const SmcTable a = scan(env, body(), {}, kDesk);
  const SmcTable b = scan(displace_environment(env, {{0.2, 0.0}}), body(), {}, kDesk);
  const PhiFunction learned = learn_phi(a, b, {});
  // The environment moved by +0.2, so the agent moved by -0.2 relative to it.
  const PhiFunction truth = oracle::oracle_phi(body(), {{-0.2, 0.0}}, kDesk);
  const auto cmp = oracle::compare_with_oracle(learned, truth);
  ASSERT_GT(cmp.compared, 1000u);
  EXPECT_LE(cmp.mean_discrepancy, 0.02);
  EXPECT_LT(cmp.mean_discrepancy, 1e-9);
}

TEST(LearnPhi, SingleSourceContainsOraclePairs) {
  const Environment env({{{0.5, 0.5}, 1.0}});
  const SmcTable a = scan(env, body(), {}, ScanGrid{21, 21});
  const SmcTable b = scan(displace_environment(env, {{0.1, 0.0}}), body(), {}, ScanGrid{21, 21});
  MatchConfig cfg;
  std::vector<PhiPair> raw;
  for (const auto &[k, kk] : match_coincidences(a, b, cfg)) raw.push_back({a[k].p, b[kk].p, k, kk});
  const PhiFunction truth = oracle::oracle_phi(body(), {{-0.1, 0.0}}, ScanGrid{21, 21});
  std::set<std::pair<std::size_t, std::size_t>> found;
  for (const auto &pr : raw) found.insert({pr.domain_index, pr.image_index});
  for (const auto &pr : truth.pairs) {
    ASSERT_NE(pr.image_index, kNoIndex);
    EXPECT_TRUE(found.count({pr.domain_index, pr.image_index})) << pr.domain_index;
  }
  EXPECT_GT(raw.size(), truth.size());
}

TEST(Matching, IndexedEqualsNaive) {
  CounterRng rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    const Environment env = random_env(rng, trial % 2 ? 3 : 60, Box::centered({0.5, 0.5}, 2.0));
    const Vec2 shift{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
    const SmcTable a = scan(env, body(), {}, ScanGrid{15, 13});
    const SmcTable b = scan(displace_environment(env, {shift}), body(), {}, ScanGrid{15, 13});
    for (auto policy : {CoincidencePolicy::kAll, CoincidencePolicy::kUnambiguous}) {
      for (double tol : {0.005, 0.05}) {
        MatchConfig cfg;
        cfg.policy = policy;
        cfg.photo_tol = tol;
        EXPECT_EQ(match_coincidences(a, b, cfg), match_coincidences_naive(a, b, cfg));
      }
    }
  }
}

TEST(Matching, IndexedEqualsNaiveWithContext) {
  const Agent1D agent;
  CounterRng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Environment1D env;
    for (int i = 0; i < 6; ++i) env.push_back({rng.uniform(-0.3, 1.3), rng.uniform(0.5, 1.5)});
    const SmcTable a = scan_1d(agent, env, 201);
    const SmcTable b = scan_1d(agent, shift_environment(env, 0.1), 201);
    for (std::size_t radius : {0u, 2u}) {
      for (auto policy : {CoincidencePolicy::kAll, CoincidencePolicy::kUnambiguous}) {
        MatchConfig cfg;
        cfg.context_radius = radius;
        cfg.policy = policy;
        EXPECT_EQ(match_coincidences(a, b, cfg), match_coincidences_naive(a, b, cfg));
      }
    }
  }
  MatchConfig cfg;
  cfg.context_radius = 1;
  const SmcTable t = scan(Environment{}, body(), {}, ScanGrid{3, 3});
  EXPECT_THROW(match_coincidences(t, t, cfg), ConfigError);
}

TEST(Matching, UnambiguousIsOneToOneSubsetOfAll) {
  const Environment env({{{0.4, 0.5}, 1.0}, {{0.9, 0.2}, 0.7}});
  const SmcTable a = scan(env, body(), {}, ScanGrid{21, 21});
  const SmcTable b = scan(displace_environment(env, {{0.1, 0.05}}), body(), {}, ScanGrid{21, 21});
  MatchConfig all, strict;
  strict.policy = CoincidencePolicy::kUnambiguous;
  const auto pa = match_coincidences(a, b, all);
  const auto pu = match_coincidences(a, b, strict);
  EXPECT_LT(pu.size(), pa.size());
  std::set<std::size_t> before, after;
  for (const auto &pr : pu) {
    EXPECT_TRUE(std::binary_search(pa.begin(), pa.end(), pr));
    EXPECT_TRUE(before.insert(pr.first).second);
    EXPECT_TRUE(after.insert(pr.second).second);
  }
}

TEST(Dedup, FirstPairWins) {
  auto pv = [](double a, double b) { return ProprioVector{{a, b}}; };
  std::vector<PhiPair> pairs{
      {pv(0.10, 0.10), pv(0.50, 0.50), 0, 0},
      {pv(0.105, 0.10), pv(0.505, 0.50), 1, 1},  // duplicate of 0
      {pv(0.105, 0.10), pv(0.70, 0.50), 2, 2},   // same p, different p'
      {pv(0.30, 0.10), pv(0.50, 0.50), 3, 3},
  };
  const PhiFunction out = deduplicate(pairs, 0.01);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out.pairs[0].domain_index, 0u);
  EXPECT_EQ(out.pairs[1].domain_index, 2u);
  EXPECT_EQ(out.pairs[2].domain_index, 3u);
}

TEST(Oracle, SimpleCases) {
  const PhiFunction id = oracle::oracle_phi(body(), {}, kDesk);
  ASSERT_EQ(id.size(), kDesk.size());
  for (std::size_t k = 0; k < id.size(); ++k) {
    EXPECT_EQ(id.pairs[k].p, id.pairs[k].p_image);
    EXPECT_EQ(id.pairs[k].image_index, k);
  }
  EXPECT_TRUE(oracle::oracle_phi(body(), {{1.5, 0}}, kDesk).empty());
  const PhiFunction half = oracle::oracle_phi(body(), {{0.5, 0}}, kDesk);
  EXPECT_EQ(half.size(), 26u * 51u);
  for (const auto &pr : half.pairs) EXPECT_GE(pr.domain_index % 51, 25u);
}

TEST(PhiDistance, SelfDisjointAndMonotone) {
  const PhiFunction a = oracle::oracle_phi(body(), {{0.1, 0.1}}, kDesk);
  EXPECT_EQ(phi_distance(a, a).value(), 0.0);

  PhiFunction left, right;
  for (const auto &pr : a.pairs) (pr.domain_index % 51 < 30 ? left : right).pairs.push_back(pr);
  EXPECT_FALSE(phi_distance(left, right).has_value());
  EXPECT_FALSE(phi_distance(a, PhiFunction{}).has_value());

  // Along a ray from delta, the distance never decreases.
  const Vec2 delta{0.1, 0.1};
  const Vec2 dir{0.6, -0.8};
  const PhiFunction base = oracle::oracle_phi(body(), {delta}, kDesk);
  double prev = 0.0;
  for (double t : {0.0, 0.02, 0.05, 0.1, 0.2}) {
    const PhiFunction other = oracle::oracle_phi(body(), {delta + t * dir}, kDesk);
    const double rho = phi_distance(base, other).value();
    EXPECT_GE(rho, prev - 1e-12) << t;
    prev = rho;
  }
  EXPECT_GT(prev, 0.0);
}

TEST(Compose, IdentityAndGroupLaw) {
  const MatchConfig cfg;
  const PhiFunction id = oracle::oracle_phi(body(), {}, kDesk);
  const PhiFunction a = oracle::oracle_phi(body(), {{0.2, 0.0}}, kDesk);
  const PhiFunction composed = compose_phi(id, a, cfg);
  ASSERT_EQ(composed.size(), a.size());
  EXPECT_NEAR(phi_distance(composed, a).value(), 0.0, 1e-12);

  const PhiFunction b = oracle::oracle_phi(body(), {{0.0, -0.1}}, kDesk);
  const PhiFunction ab = oracle::oracle_phi(body(), {{0.2, -0.1}}, kDesk);
  const PhiFunction ba = compose_phi(b, a, cfg);
  ASSERT_FALSE(ba.empty());
  EXPECT_NEAR(phi_distance(ba, ab).value(), 0.0, 1e-12);

  const PhiFunction far = oracle::oracle_phi(body(), {{0.9, 0.9}}, kDesk);
  const PhiFunction far_back = oracle::oracle_phi(body(), {{0.9, 0.0}}, kDesk);
  EXPECT_TRUE(compose_phi(far_back, far, cfg).empty());
}

TEST(PhiCsv, Header) {
  std::ostringstream os;
  write_phi_csv(os, oracle::oracle_phi(body(), {}, ScanGrid{2, 2}));
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("p_1,", 0), 0u);
  EXPECT_NE(s.find("p_8,pprime_1"), std::string::npos);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);
}

TEST(Calibration, CoverageQuantile) {
  EXPECT_EQ(coverage_quantile({5, 1, 3, 2, 4, 6, 7, 8, 9, 10}, 10, 0.9), 9);
  // Two undefined trials: 9 of 10 identical needs the 9th smallest of all.
  EXPECT_EQ(coverage_quantile({1, 2, 3, 4, 5, 6, 7, 8}, 10, 0.9), 8);
  EXPECT_EQ(coverage_quantile({0, 0, 0, 0}, 4, 0.9), 0);
  EXPECT_THROW(coverage_quantile({}, 3, 0.9), CalibrationError);
}

TEST(Calibration, PreconditionsAndFailure) {
  const ScanGrid grid{11, 11};
  const PairedSceneGenerator same = [](CounterRng &, const Vec2 &) {
    const Environment env = rich_env(7);
    const Scene s{env, displace_environment(env, {{0.1, 0}}), {}, {}};
    return PairedScene{s, s};
  };
  CalibrationOptions opt;
  opt.n_trials = 19;
  EXPECT_THROW(calibrate_threshold(body(), grid, same, {}, opt), ConfigError);

  opt.n_trials = 20;
  const PhiThreshold th = calibrate_threshold(body(), grid, same, {}, opt);
  EXPECT_EQ(th.value, 0.0);
  EXPECT_EQ(th.quantile, 0.9);
  EXPECT_EQ(th.displacement_size, 0.005);
  EXPECT_EQ(th.n_trials, 20u);

  const PairedSceneGenerator apart = [](CounterRng &, const Vec2 &) {
    const Environment env = rich_env(7);
    return PairedScene{{env, env, {}, {}}, {env, displace_environment(env, {{5, 5}}), {}, {}}};
  };
  EXPECT_THROW(calibrate_threshold(body(), grid, apart, {}, opt), CalibrationError);
}
