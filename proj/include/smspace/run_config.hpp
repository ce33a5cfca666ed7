#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "smspace/experiments.hpp"

namespace smspace {

/// `paper` carries the full-resolution constants; `desk` shrinks the scan
/// grid, the atlas lattice and the trial counts so each run takes minutes.
enum class Profile { kDesk, kPaper };

const char *to_string(Profile p);
/// Throws ConfigError on anything but "desk" or "paper".
Profile profile_from_string(const std::string &s);

/// One `key = value` line of a config file. `origin` is "file:line".
struct ConfigEntry {
  std::string key;
  std::string value;
  std::string origin;
};

/// Reads a TOML-style file: `key = value` lines, `# comments`, and `[section]`
/// headers that prefix the following keys with "section.". Strings may be
/// quoted. Throws ConfigError naming the line on malformed input.
std::vector<ConfigEntry> parse_config(std::istream &in, const std::string &name);

/// Every tunable of every experiment as a named key, filled from a profile and
/// then overridden one key at a time.
class RunConfig {
 public:
  explicit RunConfig(Profile profile = Profile::kDesk);

  Profile profile() const { return profile_; }

  /// Parses and range-checks `value` for `key`. Errors name the key and, when
  /// given, the origin.
  void set(const std::string &key, const std::string &value, const std::string &origin = "");

  double real(const std::string &key) const;
  std::size_t count(const std::string &key) const;
  bool flag(const std::string &key) const;
  /// Unset optional keys (thresholds) read as nullopt.
  std::optional<double> optional(const std::string &key) const;

  bool overridden(const std::string &key) const { return overridden_.count(key) > 0; }
  std::vector<std::string> keys() const;
  std::string format(const std::string &key) const;

  /// Checks that involve more than one key, and that every key left alone
  /// still holds its profile value.
  void validate() const;

  nlohmann::json to_json() const;

 private:
  Profile profile_;
  std::map<std::string, double> values_;
  std::set<std::string> overridden_;
};

const std::vector<std::string> &experiment_names();

ExperimentContext run_context(const RunConfig &cfg, std::uint64_t seed, std::size_t threads);
AtlasOptions atlas_options(const RunConfig &cfg);
RigidOptions rigid_options(const RunConfig &cfg);
MediumOptions medium_options(const RunConfig &cfg);
RelposOptions relpos_options(const RunConfig &cfg);
Demo1DOptions demo1d_options(const RunConfig &cfg);
AudioOptions audio_options(const RunConfig &cfg);

/// The `<experiment>.trials` key, which --trials sets.
std::string trials_key(const std::string &experiment);

/// Throws ConfigError for an unknown experiment name.
ExperimentOutput run_named_experiment(const std::string &experiment, const RunConfig &cfg, std::uint64_t seed,
                                      std::size_t threads);

/// Threshold alone, as the named experiment would calibrate it. demo1d has
/// none and throws ConfigError.
PhiThreshold calibrate_named_experiment(const std::string &experiment, const RunConfig &cfg, std::uint64_t seed,
                                        std::size_t threads);

/// "name: path.to.value = v" for every scalar in the report summary.
std::vector<std::string> summary_lines(const ExperimentReport &report);

}  // namespace smspace
