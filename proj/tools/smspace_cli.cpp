// smspace: run the sensorimotor-space experiments from the command line.
//
// Exit status: 0 on success, 2 for usage and configuration errors, 1 when
// outputs cannot be written or a run fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smspace/errors.hpp"
#include "smspace/run_config.hpp"

namespace fs = std::filesystem;
using namespace smspace;

namespace {

constexpr int kUsage = 2;
constexpr int kIo = 1;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string experiment;
  std::string profile = "desk";
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  std::string out = "results";
  std::optional<std::size_t> trials;
  std::string config_file;
  std::vector<std::string> sets;
  bool no_timestamp = false;
};

RunConfig resolve(const Flags &f, const CLI::App &app) {
  std::vector<ConfigEntry> entries;
  std::optional<std::string> file_profile;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw ConfigError("cannot read config file " + f.config_file);
    for (auto &e : parse_config(in, f.config_file)) {
      if (e.key == "profile") {
        file_profile = e.value;
      } else {
        entries.push_back(std::move(e));
      }
    }
  }
  const bool profile_flag = app.count("--profile") > 0;
  RunConfig cfg(profile_from_string(profile_flag || !file_profile ? f.profile : *file_profile));
  for (const auto &e : entries) cfg.set(e.key, e.value, e.origin);
  for (const auto &kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1), "--set");
  }
  if (f.trials) cfg.set(trials_key(f.experiment), std::to_string(*f.trials), "--trials");
  cfg.validate();
  return cfg;
}

void write_file(const fs::path &path, const std::string &content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << content;
  os.close();
  if (!os) throw IoError("failed writing " + path.string());
}

fs::path prepare_out(const std::string &out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return out;
}

int cmd_run(const Flags &f, const CLI::App &app) {
  const RunConfig cfg = resolve(f, app);
  const fs::path dir = prepare_out(f.out);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentOutput out = run_named_experiment(f.experiment, cfg, f.seed, f.threads);
  out.report.config["profile"] = to_string(cfg.profile());
  const std::string stem = f.experiment + "_" + std::to_string(f.seed);

  std::ostringstream json, csv;
  write_report_json(json, out.report);
  write_curves_csv(csv, out.report);
  write_file(dir / (stem + ".json"), json.str());
  write_file(dir / (stem + ".csv"), csv.str());
  write_file(dir / (stem + ".svg"), out.figure.render(!f.no_timestamp));

  for (const auto &line : summary_lines(out.report)) std::cout << line << "\n";
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "wrote " << (dir / stem).string() << ".{json,csv,svg} in " << secs << " s\n";
  return 0;
}

int cmd_validate(const Flags &f, const CLI::App &app) {
  const RunConfig cfg = resolve(f, app);
  std::cout << "profile = " << to_string(cfg.profile()) << "\n";
  for (const auto &k : cfg.keys()) {
    std::cout << k << " = " << cfg.format(k) << (cfg.overridden(k) ? "  # override" : "") << "\n";
  }
  std::cout << "atlas functions = " << atlas_size(cfg.real("atlas.jump_step"), cfg.real("atlas.jump_extent"))
            << "\n";
  return 0;
}

int cmd_calibrate(const Flags &f, const CLI::App &app) {
  const RunConfig cfg = resolve(f, app);
  const fs::path dir = prepare_out(f.out);
  const PhiThreshold th = calibrate_named_experiment(f.experiment, cfg, f.seed, f.threads);
  const nlohmann::json j = {{"experiment", f.experiment},
                            {"seed", f.seed},
                            {"profile", to_string(cfg.profile())},
                            {"value", th.value},
                            {"quantile", th.quantile},
                            {"displacement_size", th.displacement_size},
                            {"n_trials", th.n_trials},
                            {"n_undefined", th.n_undefined}};
  write_file(dir / ("calibration_" + f.experiment + "_" + std::to_string(f.seed) + ".json"), j.dump(1) + "\n");
  std::cout << f.experiment << ": threshold = " << th.value << " (quantile " << th.quantile << ", " << th.n_trials
            << " trials, " << th.n_undefined << " undefined)\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sensorimotor space experiments"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App *sub) {
    sub->add_option("--profile", f.profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--config", f.config_file, "key = value file");
    sub->add_option("--set", f.sets, "override one key (key=value), repeatable");
  };
  auto seeded = [&f](CLI::App *sub) {
    sub->add_option("--seed", f.seed, "run seed");
    sub->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "output directory");
  };
  const auto names = experiment_names();

  CLI::App *run = app.add_subcommand("run", "run an experiment and write <out>/<experiment>_<seed>.{json,csv,svg}");
  run->add_option("experiment", f.experiment)->required()->check(CLI::IsMember(names));
  common(run);
  seeded(run);
  run->add_option("--trials", f.trials, "trial count for the experiment");
  run->add_flag("--no-timestamp", f.no_timestamp, "leave the generation time out of the SVG");

  CLI::App *validate = app.add_subcommand("validate", "check a configuration and print the resolved keys");
  common(validate);

  CLI::App *calibrate = app.add_subcommand("calibrate", "calibrate an experiment's decision threshold");
  calibrate->add_option("experiment", f.experiment)->required()->check(CLI::IsMember(names));
  common(calibrate);
  seeded(calibrate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*run) return cmd_run(f, *run);
    if (*validate) return cmd_validate(f, *validate);
    return cmd_calibrate(f, *calibrate);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
