#include "smspace/environment.hpp"

#include <cmath>
#include <string>

#include "smspace/errors.hpp"

namespace smspace {

Environment::Environment(std::vector<LightSource> sources) : sources_(std::move(sources)) {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    const auto &s = sources_[i];
    if (!is_finite(s.position) || !std::isfinite(s.intensity)) {
      throw ConfigError("light source " + std::to_string(i) + " has a non-finite field");
    }
    if (s.intensity < 0.0) {
      throw ConfigError("light source " + std::to_string(i) + " has negative intensity");
    }
  }
}

Environment displace_environment(const Environment &env, const RigidDisplacement &d) {
  std::vector<LightSource> moved(env.sources().begin(), env.sources().end());
  for (auto &s : moved) s.position = apply(d, s.position);
  return Environment(std::move(moved));
}

Environment merge(const Environment &a, const Environment &b) {
  std::vector<LightSource> all(a.sources().begin(), a.sources().end());
  all.insert(all.end(), b.sources().begin(), b.sources().end());
  return Environment(std::move(all));
}

nlohmann::json environment_to_json(const Environment &env) {
  auto sources = nlohmann::json::array();
  for (const auto &s : env.sources()) {
    sources.push_back({{"x", s.position.x}, {"y", s.position.y}, {"intensity", s.intensity}});
  }
  return {{"sources", std::move(sources)}};
}

Environment environment_from_json(const nlohmann::json &doc) {
  if (!doc.is_object() || !doc.contains("sources") || !doc.at("sources").is_array()) {
    throw ConfigError("environment document must be an object with a \"sources\" array");
  }
  std::vector<LightSource> sources;
  for (const auto &item : doc.at("sources")) {
    for (const char *key : {"x", "y", "intensity"}) {
      if (!item.contains(key) || !item.at(key).is_number()) {
        throw ConfigError(std::string("light source field \"") + key + "\" missing or not a number");
      }
    }
    sources.push_back({{item.at("x").get<double>(), item.at("y").get<double>()},
                       item.at("intensity").get<double>()});
  }
  return Environment(std::move(sources));
}

}  // namespace smspace
