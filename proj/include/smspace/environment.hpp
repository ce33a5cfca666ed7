#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "smspace/geometry.hpp"

namespace smspace {

/// Point light source, projected onto the agent's plane.
struct LightSource {
  Vec2 position;
  double intensity = 1.0;

  friend bool operator==(const LightSource &, const LightSource &) = default;
};

/// Ordered set of light sources. Immutable once built.
class Environment {
 public:
  Environment() = default;
  /// Throws ConfigError on negative intensity or non-finite position.
  explicit Environment(std::vector<LightSource> sources);

  std::span<const LightSource> sources() const { return sources_; }
  std::size_t size() const { return sources_.size(); }
  bool empty() const { return sources_.empty(); }

  friend bool operator==(const Environment &, const Environment &) = default;

 private:
  std::vector<LightSource> sources_;
};

/// Translate every source by `d`; intensities and order are kept.
Environment displace_environment(const Environment &env, const RigidDisplacement &d);

/// Concatenation of two environments (sources of `a` first).
Environment merge(const Environment &a, const Environment &b);

// {"sources":[{"x":..,"y":..,"intensity":..}, ...]}
nlohmann::json environment_to_json(const Environment &env);
Environment environment_from_json(const nlohmann::json &doc);

}  // namespace smspace
