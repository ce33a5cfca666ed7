#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smspace/errors.hpp"
#include "smspace/run_config.hpp"

using namespace smspace;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string &args) {
  const std::string cmd = std::string(SMSPACE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::path(testing::TempDir()) / ("smspace_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(RunConfig, FullProfileConstants) {
  const RunConfig cfg(Profile::kPaper);
  EXPECT_EQ(cfg.count("grid"), 201u);
  EXPECT_EQ(cfg.real("photo_tol"), 0.005);
  EXPECT_EQ(cfg.real("proprio_tol"), 0.01);
  EXPECT_EQ(cfg.count("rigid.trials"), 1000u);
  EXPECT_EQ(cfg.count("medium.trials"), 10000u);
  EXPECT_EQ(cfg.count("relpos.trials"), 1000u);
  EXPECT_EQ(cfg.real("atlas.jump_step"), 0.02);
  EXPECT_EQ(cfg.real("atlas.jump_extent"), 1.8);
  EXPECT_EQ(atlas_size(cfg.real("atlas.jump_step"), cfg.real("atlas.jump_extent")), 8281u);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_NO_THROW(RunConfig(Profile::kDesk).validate());
}

TEST(RunConfig, OverridesAreTypedAndNamed) {
  RunConfig cfg;
  cfg.set("rigid.trials", "12");
  EXPECT_EQ(cfg.count("rigid.trials"), 12u);
  EXPECT_TRUE(cfg.overridden("rigid.trials"));
  EXPECT_FALSE(cfg.overridden("grid"));
  cfg.set("atlas.keep_phis", "false");
  EXPECT_FALSE(cfg.flag("atlas.keep_phis"));
  EXPECT_FALSE(cfg.optional("rigid.threshold").has_value());
  cfg.set("rigid.threshold", "0.25");
  EXPECT_EQ(rigid_options(cfg).threshold->value, 0.25);

  auto message = [&](const std::string &key, const std::string &value) {
    try {
      cfg.set(key, value, "f.toml:3");
    } catch (const ConfigError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("photo_tol", "-0.01").find("photo_tol"), std::string::npos);
  EXPECT_NE(message("photo_tol", "-0.01").find("f.toml:3"), std::string::npos);
  EXPECT_NE(message("rigid.trials", "2.5").find("whole number"), std::string::npos);
  EXPECT_NE(message("grid", "abc").find("grid"), std::string::npos);
  EXPECT_NE(message("no.such", "1").find("unknown key"), std::string::npos);
}

TEST(RunConfig, CrossFieldChecks) {
  RunConfig cfg;
  cfg.set("atlas.jump_step", "0.07");
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("atlas.jump_step"), std::string::npos);
  }
  RunConfig g;
  g.set("lattice_step", "0.03");
  EXPECT_THROW(g.validate(), ConfigError);
  RunConfig a;
  a.set("audio.nodes", "100");
  EXPECT_THROW(a.validate(), ConfigError);
}

TEST(RunConfig, ParsesSectionsAndComments) {
  std::istringstream in("# run\ngrid = 51\n\n[rigid]\ntrials = 7  # fewer\nthreshold = \"none\"\n");
  const auto entries = parse_config(in, "c.toml");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[1].key, "rigid.trials");
  EXPECT_EQ(entries[1].value, "7");
  EXPECT_EQ(entries[1].origin, "c.toml:5");
  EXPECT_EQ(entries[2].value, "none");
  std::istringstream bad("grid = 51\noops\n");
  try {
    parse_config(bad, "c.toml");
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("c.toml:2"), std::string::npos);
  }
}

TEST(RunConfig, TrialsKey) {
  EXPECT_EQ(trials_key("medium"), "medium.trials");
  EXPECT_THROW(trials_key("atlas"), ConfigError);
  EXPECT_THROW(run_named_experiment("bogus", RunConfig{}, 1, 1), ConfigError);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("validate"), 0);
  EXPECT_EQ(run_cli("validate --profile paper"), 0);
  EXPECT_EQ(run_cli("validate --set photo_tol=-1"), 2);
  EXPECT_EQ(run_cli("validate --set atlas.jump_step=0.07"), 2);
  EXPECT_EQ(run_cli("run bogus"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("run demo1d --out /proc/no_such_dir"), 1);
}

TEST(Cli, RunWritesDeterministicArtifacts) {
  const fs::path a = scratch("a"), b = scratch("b");
  ASSERT_EQ(run_cli("run demo1d --seed 7 --trials 5 --no-timestamp --out " + a.string()), 0);
  ASSERT_EQ(run_cli("run demo1d --seed 7 --trials 5 --no-timestamp --threads 2 --out " + b.string()), 0);
  for (const char *ext : {".json", ".csv", ".svg"}) {
    const std::string name = std::string("demo1d_7") + ext;
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  const auto j = nlohmann::json::parse(slurp(a / "demo1d_7.json"));
  EXPECT_EQ(j["trials"].size(), 5u);
}

TEST(Cli, ConfigFileAndCalibrate) {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[audio]\ntrials = 4\ngroup_cases = 2\ncalibration_trials = 20\n";
  }
  ASSERT_EQ(run_cli("run audio --seed 3 --config " + (dir / "run.toml").string() + " --out " + dir.string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "audio_3.json"));
  EXPECT_EQ(j["trials"].size(), 6u);
  ASSERT_EQ(run_cli("calibrate audio --seed 3 --config " + (dir / "run.toml").string() + " --out " + dir.string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "calibration_audio_3.json"));
  EXPECT_EQ(run_cli("calibrate demo1d --out " + dir.string()), 2);
}
