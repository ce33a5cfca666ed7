#include "smspace/run_config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "smspace/errors.hpp"

namespace smspace {

namespace {

enum class Kind { kReal, kCount, kFlag, kOptional };

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct KeyDef {
  const char *key;
  Kind kind;
  double full;
  double desk;
  double lo = -kInf;
  bool lo_open = false;
  double hi = kInf;
  bool hi_open = false;
};

// Desk trial counts keep every run under a few minutes on one core.
const std::vector<KeyDef> &key_defs() {
  static const std::vector<KeyDef> table = {
      {"grid", Kind::kCount, 201, 51, 2},
      {"photo_tol", Kind::kReal, 0.005, 0.005, 0, true},
      {"proprio_tol", Kind::kReal, 0.01, 0.01, 0, true},
      {"lattice_step", Kind::kReal, 0.02, 0.02, 0, true},
      {"quantile", Kind::kReal, 0.9, 0.9, 0, true, 1},
      {"calibration_size", Kind::kReal, 0.005, 0.005, 0},

      {"atlas.jump_step", Kind::kReal, 0.02, 0.2, 0, true},
      {"atlas.jump_extent", Kind::kReal, 1.8, 1.8, 0},
      {"atlas.calibration_trials", Kind::kCount, 1000, 200, 20},
      {"atlas.check_composition", Kind::kFlag, 0, 1},
      {"atlas.keep_phis", Kind::kFlag, 0, 1},

      {"rigid.trials", Kind::kCount, 1000, 400, 1},
      {"rigid.calibration_trials", Kind::kCount, 1000, 200, 20},
      {"rigid.max_difference", Kind::kReal, 0.1, 0.1, 0},
      {"rigid.threshold", Kind::kOptional, kUnset, kUnset, 0},

      {"medium.trials", Kind::kCount, 10000, 1000, 1},
      {"medium.calibration_trials", Kind::kCount, 1000, 300, 20},
      {"medium.validation_trials", Kind::kCount, 1000, 300, 0},
      {"medium.max_deformation", Kind::kReal, 0.5, 0.5, 0, false, 1, true},
      {"medium.small_deformation", Kind::kReal, 0.005, 0.005, 0},
      {"medium.circle_region", Kind::kReal, 0.4, 0.4, 0},
      {"medium.jump_region", Kind::kReal, 0.6, 0.6, 0},
      {"medium.jump_bins", Kind::kCount, 4, 4, 1},
      {"medium.epsilon_threshold", Kind::kOptional, kUnset, kUnset, 0},

      {"relpos.trials", Kind::kCount, 1000, 200, 1},
      {"relpos.calibration_trials", Kind::kCount, 1000, 200, 20},
      {"relpos.destination_x", Kind::kReal, 0.6, 0.6},
      {"relpos.destination_y", Kind::kReal, 0.6, 0.6},
      {"relpos.intermediate_region", Kind::kReal, 0.9, 0.9, 0},
      {"relpos.offset_range", Kind::kReal, 0.15, 0.15, 0},
      {"relpos.threshold", Kind::kOptional, kUnset, kUnset, 0},

      {"demo1d.trials", Kind::kCount, 20, 20, 1},
      {"demo1d.nodes", Kind::kCount, 201, 201, 2},
      {"demo1d.lights", Kind::kCount, 10, 10, 1},
      {"demo1d.max_shift", Kind::kReal, 0.2, 0.2, 0},
      {"demo1d.photo_tol", Kind::kReal, 0.005, 0.005, 0, true},

      {"audio.trials", Kind::kCount, 100, 100, 1},
      {"audio.calibration_trials", Kind::kCount, 100, 100, 20},
      {"audio.group_cases", Kind::kCount, 20, 20, 0},
      {"audio.nodes", Kind::kCount, kAudioNodes, kAudioNodes, 2},
      {"audio.f_min", Kind::kReal, 110, 110, 0, true},
      {"audio.f_max", Kind::kReal, 1760, 1760, 0, true},
      {"audio.width", Kind::kReal, 0.3, 0.3, 0, true},
      {"audio.photo_tol", Kind::kReal, 0.005, 0.005, 0, true},
      {"audio.max_semitones", Kind::kCount, 12, 12, 0},
  };
  return table;
}

const KeyDef &key_def(const std::string &key) {
  for (const auto &s : key_defs()) {
    if (key == s.key) return s;
  }
  throw ConfigError("unknown key '" + key + "'");
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string &origin) { return origin.empty() ? "" : origin + ": "; }

std::string number(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  // Shortest form that still round-trips.
  for (int p = 1; p <= std::numeric_limits<double>::max_digits10; ++p) {
    std::ostringstream t;
    t.precision(p);
    t << v;
    if (std::stod(t.str()) == v) return t.str();
  }
  return os.str();
}

double parse_value(const KeyDef &s, const std::string &raw) {
  const std::string v = trim(raw);
  if (s.kind == Kind::kFlag) {
    if (v == "true" || v == "1") return 1;
    if (v == "false" || v == "0") return 0;
    throw ConfigError("expects true or false, got '" + v + "'");
  }
  if (s.kind == Kind::kOptional && (v == "none" || v.empty())) return kUnset;
  double x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError("expects a number, got '" + v + "'");
  }
  if (s.kind == Kind::kCount && (x < 0 || x != std::floor(x))) {
    throw ConfigError("expects a whole number, got '" + v + "'");
  }
  const bool below = s.lo_open ? !(x > s.lo) : !(x >= s.lo);
  const bool above = s.hi_open ? !(x < s.hi) : !(x <= s.hi);
  if (below || above) {
    std::string range = std::string(s.lo_open ? "(" : "[") + (std::isinf(s.lo) ? "-inf" : number(s.lo)) + ", " +
                        (std::isinf(s.hi) ? "inf" : number(s.hi)) + (s.hi_open || std::isinf(s.hi) ? ")" : "]");
    throw ConfigError("must lie in " + range + ", got " + v);
  }
  return x;
}

double profile_value(const KeyDef &s, Profile p) { return p == Profile::kPaper ? s.full : s.desk; }

bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

void flatten(const nlohmann::json &j, const std::string &path, const std::string &name,
             std::vector<std::string> &out) {
  if (j.is_object()) {
    for (const auto &[k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, name, out);
  } else if (!j.is_array()) {
    out.push_back(name + ": " + path + " = " + (j.is_string() ? j.get<std::string>() : j.dump()));
  }
}

}  // namespace

const char *to_string(Profile p) { return p == Profile::kPaper ? "paper" : "desk"; }

Profile profile_from_string(const std::string &s) {
  if (s == "desk") return Profile::kDesk;
  if (s == "paper") return Profile::kPaper;
  throw ConfigError("profile: expected desk or paper, got '" + s + "'");
}

std::vector<ConfigEntry> parse_config(std::istream &in, const std::string &name) {
  std::vector<ConfigEntry> out;
  std::string line, section;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const std::string origin = name + ":" + std::to_string(n);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError(origin + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ": missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.push_back({section.empty() ? key : section + "." + key, value, origin});
  }
  return out;
}

RunConfig::RunConfig(Profile profile) : profile_(profile) {
  for (const auto &s : key_defs()) values_[s.key] = profile_value(s, profile);
}

void RunConfig::set(const std::string &key, const std::string &value, const std::string &origin) {
  const KeyDef *s = nullptr;
  try {
    s = &key_def(key);
  } catch (const ConfigError &e) {
    throw ConfigError(where(origin) + e.what());
  }
  try {
    values_[key] = parse_value(*s, value);
  } catch (const ConfigError &e) {
    throw ConfigError(where(origin) + key + " " + e.what());
  }
  overridden_.insert(key);
}

double RunConfig::real(const std::string &key) const {
  key_def(key);
  return values_.at(key);
}

std::size_t RunConfig::count(const std::string &key) const { return static_cast<std::size_t>(real(key)); }

bool RunConfig::flag(const std::string &key) const { return real(key) != 0.0; }

std::optional<double> RunConfig::optional(const std::string &key) const {
  const double v = real(key);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::vector<std::string> RunConfig::keys() const {
  std::vector<std::string> k;
  for (const auto &s : key_defs()) k.emplace_back(s.key);
  return k;
}

std::string RunConfig::format(const std::string &key) const {
  const KeyDef &s = key_def(key);
  const double v = values_.at(key);
  switch (s.kind) {
    case Kind::kFlag:
      return v != 0.0 ? "true" : "false";
    case Kind::kOptional:
      if (std::isnan(v)) return "none";
      return number(v);
    case Kind::kCount:
      return std::to_string(static_cast<std::size_t>(v));
    case Kind::kReal:
      break;
  }
  return number(v);
}

void RunConfig::validate() const {
  for (const auto &s : key_defs()) {
    if (!overridden(s.key) && !same_value(values_.at(s.key), profile_value(s, profile_))) {
      throw ConfigError(std::string(s.key) + " differs from the " + to_string(profile_) +
                        " profile without an override");
    }
  }
  try {
    atlas_size(real("atlas.jump_step"), real("atlas.jump_extent"));
  } catch (const ConfigError &) {
    throw ConfigError("atlas.jump_step = " + format("atlas.jump_step") + " does not divide atlas.jump_extent = " +
                      format("atlas.jump_extent") + " evenly");
  }
  const double jump_step = real("atlas.jump_step") / real("lattice_step");
  if (std::fabs(jump_step - std::round(jump_step)) > 1e-6) {
    throw ConfigError("atlas.jump_step must be a whole multiple of lattice_step");
  }
  try {
    run_context(*this, 0, 1).validate();
  } catch (const ConfigError &e) {
    throw ConfigError(std::string("lattice_step / grid: ") + e.what());
  }
  if (!(real("audio.f_min") < real("audio.f_max"))) throw ConfigError("audio.f_min must be below audio.f_max");
  const double span = std::log(real("audio.f_max") / real("audio.f_min"));
  const double per_semitone = std::log(2.0) / 12.0 / (span / static_cast<double>(count("audio.nodes") - 1));
  if (std::fabs(per_semitone - std::round(per_semitone)) > 1e-6 || std::round(per_semitone) < 1) {
    throw ConfigError("audio.nodes must put a whole number of scan steps in a semitone");
  }
  if (real("medium.small_deformation") >= real("medium.max_deformation")) {
    throw ConfigError("medium.small_deformation must be below medium.max_deformation");
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"profile", to_string(profile_)}};
  for (const auto &s : key_defs()) {
    const double v = values_.at(s.key);
    switch (s.kind) {
      case Kind::kFlag:
        j[s.key] = v != 0.0;
        break;
      case Kind::kCount:
        j[s.key] = static_cast<std::size_t>(v);
        break;
      case Kind::kOptional:
        j[s.key] = std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
        break;
      case Kind::kReal:
        j[s.key] = v;
        break;
    }
  }
  return j;
}

const std::vector<std::string> &experiment_names() {
  static const std::vector<std::string> names = {"atlas", "rigid", "medium", "relpos", "demo1d", "audio"};
  return names;
}

ExperimentContext run_context(const RunConfig &cfg, std::uint64_t seed, std::size_t threads) {
  const std::size_t n = cfg.count("grid");
  ExperimentContext ctx = make_context(seed, {n, n}, threads);
  ctx.match.photo_tol = cfg.real("photo_tol");
  ctx.match.dedup_tol = cfg.real("proprio_tol");
  ctx.lattice_step = cfg.real("lattice_step");
  ctx.quantile = cfg.real("quantile");
  ctx.calibration_size = cfg.real("calibration_size");
  return ctx;
}

AtlasOptions atlas_options(const RunConfig &cfg) {
  AtlasOptions o;
  o.jump_step = cfg.real("atlas.jump_step");
  o.jump_extent = cfg.real("atlas.jump_extent");
  o.calibration_trials = cfg.count("atlas.calibration_trials");
  o.check_composition = cfg.flag("atlas.check_composition");
  o.keep_phis = cfg.flag("atlas.keep_phis");
  return o;
}

namespace {

std::optional<PhiThreshold> fixed_threshold(const RunConfig &cfg, const std::string &key) {
  const auto v = cfg.optional(key);
  if (!v) return std::nullopt;
  PhiThreshold th;
  th.value = *v;
  th.quantile = cfg.real("quantile");
  th.displacement_size = cfg.real("calibration_size");
  return th;
}

}  // namespace

RigidOptions rigid_options(const RunConfig &cfg) {
  RigidOptions o;
  o.n_trials = cfg.count("rigid.trials");
  o.calibration_trials = cfg.count("rigid.calibration_trials");
  o.max_difference = cfg.real("rigid.max_difference");
  o.threshold = fixed_threshold(cfg, "rigid.threshold");
  return o;
}

MediumOptions medium_options(const RunConfig &cfg) {
  MediumOptions o;
  o.n_trials = cfg.count("medium.trials");
  o.calibration_trials = cfg.count("medium.calibration_trials");
  o.validation_trials = cfg.count("medium.validation_trials");
  o.max_deformation = cfg.real("medium.max_deformation");
  o.small_deformation = cfg.real("medium.small_deformation");
  o.circle_region = cfg.real("medium.circle_region");
  o.jump_region = cfg.real("medium.jump_region");
  o.jump_bins = cfg.count("medium.jump_bins");
  o.epsilon_threshold = cfg.optional("medium.epsilon_threshold");
  return o;
}

RelposOptions relpos_options(const RunConfig &cfg) {
  RelposOptions o;
  o.n_trials = cfg.count("relpos.trials");
  o.calibration_trials = cfg.count("relpos.calibration_trials");
  o.destination = {cfg.real("relpos.destination_x"), cfg.real("relpos.destination_y")};
  o.intermediate_region = cfg.real("relpos.intermediate_region");
  o.offset_range = cfg.real("relpos.offset_range");
  o.threshold = fixed_threshold(cfg, "relpos.threshold");
  return o;
}

Demo1DOptions demo1d_options(const RunConfig &cfg) {
  Demo1DOptions o;
  o.n_trials = cfg.count("demo1d.trials");
  o.n_nodes = cfg.count("demo1d.nodes");
  o.n_lights = cfg.count("demo1d.lights");
  o.max_shift = cfg.real("demo1d.max_shift");
  o.photo_tol = cfg.real("demo1d.photo_tol");
  return o;
}

AudioOptions audio_options(const RunConfig &cfg) {
  AudioOptions o;
  o.n_trials = cfg.count("audio.trials");
  o.calibration_trials = cfg.count("audio.calibration_trials");
  o.group_cases = cfg.count("audio.group_cases");
  o.n_nodes = cfg.count("audio.nodes");
  o.cell.f_min = cfg.real("audio.f_min");
  o.cell.f_max = cfg.real("audio.f_max");
  o.cell.width = cfg.real("audio.width");
  o.photo_tol = cfg.real("audio.photo_tol");
  o.max_semitones = static_cast<int>(cfg.count("audio.max_semitones"));
  o.quantile = cfg.real("quantile");
  return o;
}

std::string trials_key(const std::string &experiment) {
  if (experiment == "atlas") throw ConfigError("atlas has no trial count; it learns one phi per lattice jump");
  return experiment + ".trials";
}

ExperimentOutput run_named_experiment(const std::string &experiment, const RunConfig &cfg, std::uint64_t seed,
                                      std::size_t threads) {
  if (experiment == "demo1d") return run_1d_demo(seed, demo1d_options(cfg), threads);
  if (experiment == "audio") return run_audio(seed, audio_options(cfg), threads);
  const ExperimentContext ctx = run_context(cfg, seed, threads);
  if (experiment == "atlas") return atlas_experiment(ctx, atlas_options(cfg));
  if (experiment == "rigid") return run_rigid_displacement(ctx, rigid_options(cfg));
  if (experiment == "medium") return run_unchanging_medium(ctx, medium_options(cfg));
  if (experiment == "relpos") return run_relative_position(ctx, relpos_options(cfg));
  throw ConfigError("unknown experiment '" + experiment + "'");
}

PhiThreshold calibrate_named_experiment(const std::string &experiment, const RunConfig &cfg, std::uint64_t seed,
                                        std::size_t threads) {
  auto from_summary = [](const ExperimentOutput &out) {
    const auto &j = out.report.summary.at("threshold");
    PhiThreshold th;
    th.value = j.at("value").get<double>();
    th.quantile = j.at("quantile").get<double>();
    th.displacement_size = j.at("displacement_size").get<double>();
    th.n_trials = j.at("n_trials").get<std::size_t>();
    th.n_undefined = j.at("n_undefined").get<std::size_t>();
    return th;
  };
  if (experiment == "demo1d") throw ConfigError("demo1d decides with a derived jitter bound, not a calibrated one");
  if (experiment == "audio") {
    AudioOptions o = audio_options(cfg);
    o.n_trials = 0;
    o.group_cases = 0;
    return from_summary(run_audio(seed, o, threads));
  }
  const ExperimentContext ctx = run_context(cfg, seed, threads);
  if (experiment == "atlas") return calibrate_atlas(ctx, atlas_options(cfg));
  if (experiment == "rigid") return calibrate_rigid(ctx, cfg.count("rigid.calibration_trials"));
  if (experiment == "relpos") return calibrate_relpos(ctx, relpos_options(cfg));
  if (experiment == "medium") {
    MediumOptions o = medium_options(cfg);
    o.epsilon_threshold.reset();
    o.n_trials = 0;
    o.validation_trials = 0;
    return from_summary(run_unchanging_medium(ctx, o));
  }
  throw ConfigError("unknown experiment '" + experiment + "'");
}

std::vector<std::string> summary_lines(const ExperimentReport &report) {
  std::vector<std::string> out;
  flatten(report.summary, "", report.experiment, out);
  return out;
}

}  // namespace smspace
