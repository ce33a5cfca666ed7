#include <gtest/gtest.h>

#include "smspace/environment.hpp"
#include "smspace/errors.hpp"
#include "smspace/geometry.hpp"
#include "smspace/parallel.hpp"
#include "smspace/rng.hpp"

using namespace smspace;

namespace {

Environment random_env(CounterRng &rng, std::size_t n, double extent = 10.0) {
  std::vector<LightSource> src;
  for (std::size_t i = 0; i < n; ++i) {
    src.push_back({{rng.uniform(-extent, extent), rng.uniform(-extent, extent)}, rng.uniform(0.5, 1.5)});
  }
  return Environment(std::move(src));
}

}  // namespace

TEST(Displacement, IdentityAndInverse) {
  const RigidDisplacement a{{0.1, 0.2}};
  EXPECT_EQ(compose_displacements(a, RigidDisplacement::identity()), a);
  const auto back = compose_displacements(a, RigidDisplacement{{-0.1, -0.2}});
  EXPECT_EQ(back.delta, (Vec2{0.0, 0.0}));
  EXPECT_EQ(compose_displacements(a, a.inverse()), RigidDisplacement::identity());
}

TEST(Displacement, ThreeSegmentsMakeTheWhole) {
  const RigidDisplacement seg{{0.2, 0.2}};
  const auto whole = compose_displacements(compose_displacements(seg, seg), seg);
  EXPECT_NEAR(whole.delta.x, 0.6, 1e-15);
  EXPECT_NEAR(whole.delta.y, 0.6, 1e-15);
}

TEST(Displacement, GroupAxiomsHoldToRoundOff) {
  CounterRng rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto draw = [&] { return RigidDisplacement{{rng.uniform(-10, 10), rng.uniform(-10, 10)}}; };
    const auto a = draw(), b = draw(), c = draw();
    const auto left = compose_displacements(compose_displacements(a, b), c);
    const auto right = compose_displacements(a, compose_displacements(b, c));
    EXPECT_NEAR(left.delta.x, right.delta.x, 1e-12);
    EXPECT_NEAR(left.delta.y, right.delta.y, 1e-12);
    const auto id = compose_displacements(a, a.inverse());
    EXPECT_NEAR(id.delta.x, 0.0, 1e-12);
    EXPECT_NEAR(id.delta.y, 0.0, 1e-12);
  }
}

TEST(Environment, DisplaceMovesEverySourceAndKeepsOrder) {
  const Environment env({{{1.0, 2.0}, 0.7}, {{-3.0, 0.5}, 1.2}});
  const Environment moved = displace_environment(env, {{0.5, -0.5}});
  ASSERT_EQ(moved.size(), 2u);
  EXPECT_EQ(moved.sources()[0].position, (Vec2{1.5, 1.5}));
  EXPECT_EQ(moved.sources()[0].intensity, 0.7);
  EXPECT_EQ(moved.sources()[1].position, (Vec2{-2.5, 0.0}));
  EXPECT_EQ(displace_environment(env, RigidDisplacement::identity()), env);
}

TEST(Environment, DisplacementRoundTrip) {
  CounterRng rng(3);
  const Environment env = random_env(rng, 50);
  const RigidDisplacement d{{0.25, -0.125}};
  EXPECT_EQ(displace_environment(displace_environment(env, d), d.inverse()), env);
}

TEST(Environment, DisplacementComposes) {
  CounterRng rng(5);
  const Environment env = random_env(rng, 100);
  for (int i = 0; i < 100; ++i) {
    const RigidDisplacement a{{rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    const RigidDisplacement b{{rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    const auto two_steps = displace_environment(displace_environment(env, a), b);
    const auto one_step = displace_environment(env, compose_displacements(a, b));
    for (std::size_t k = 0; k < env.size(); ++k) {
      EXPECT_NEAR(two_steps.sources()[k].position.x, one_step.sources()[k].position.x, 1e-12);
      EXPECT_NEAR(two_steps.sources()[k].position.y, one_step.sources()[k].position.y, 1e-12);
    }
  }
}

TEST(Environment, RejectsNegativeIntensityAndNaN) {
  EXPECT_THROW(Environment({{{0, 0}, -1.0}}), ConfigError);
  EXPECT_THROW(Environment({{{NAN, 0}, 1.0}}), ConfigError);
}

TEST(Environment, JsonRoundTrip) {
  CounterRng rng(9);
  const Environment env = random_env(rng, 20);
  const auto doc = environment_to_json(env);
  EXPECT_EQ(environment_from_json(nlohmann::json::parse(doc.dump())), env);
}

TEST(Environment, JsonSchemaErrorsNameTheField) {
  const auto doc = nlohmann::json::parse(R"({"sources":[{"x":1,"intensity":2}]})");
  try {
    environment_from_json(doc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("y"), std::string::npos);
  }
  EXPECT_THROW(environment_from_json(nlohmann::json::parse("[]")), ConfigError);
}

TEST(Lattice, SnapRoundsPerAxis) {
  const Vec2 v = snap_to_lattice({0.031, -0.049}, 0.02);
  EXPECT_NEAR(v.x, 0.04, 1e-15);
  EXPECT_NEAR(v.y, -0.04, 1e-15);
  EXPECT_EQ(snap_to_lattice({0.004, -0.0049}, 0.02), (Vec2{0.0, -0.0}));
}

TEST(Rng, SameSeedSameStream) {
  CounterRng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformStaysInRangeAndSplitIsStable) {
  CounterRng rng(1);
  double lo = 1, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    EXPECT_LT(rng.below(7), 7u);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 0.99);

  CounterRng parent(5);
  const auto s1 = parent.split(3).next_u64();
  parent.next_u64();
  EXPECT_EQ(parent.split(3).next_u64(), s1);
  EXPECT_NE(parent.split(4).next_u64(), s1);
  EXPECT_EQ(trial_seed(100, 7), 107u);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> serial(500), threaded(500);
  auto fill = [](std::vector<double> &out) {
    return [&out](std::size_t i) {
      CounterRng rng(trial_seed(77, i));
      out[i] = rng.uniform();
    };
  };
  parallel_for(serial.size(), 1, fill(serial));
  parallel_for(threaded.size(), 4, fill(threaded));
  EXPECT_EQ(serial, threaded);
}

TEST(Parallel, RethrowsLowestIndexFailure) {
  try {
    parallel_for(100, 3, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error &e) {
    EXPECT_STREQ(e.what(), "17");
  }
}
