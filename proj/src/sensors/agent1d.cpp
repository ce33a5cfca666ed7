#include "smspace/agent1d.hpp"

#include <cmath>

#include "smspace/errors.hpp"

namespace smspace {

namespace {
constexpr double kGain = 1.5;
}

void Agent1D::validate() const {
  if (!(acuity > 0.0) || !std::isfinite(acuity)) throw ConfigError("1D agent acuity must be > 0");
}

double Agent1D::proprio(double x) { return 0.5 + std::tanh(kGain * (x - 0.5)) / (2.0 * std::tanh(kGain / 2)); }

double Agent1D::proprio_inverse(double p) {
  return 0.5 + std::atanh((2.0 * p - 1.0) * std::tanh(kGain / 2)) / kGain;
}

double Agent1D::proprio_slope(double x) {
  const double c = std::cosh(kGain * (x - 0.5));
  return kGain / (c * c * 2.0 * std::tanh(kGain / 2));
}

double photo_response_1d(const Agent1D &agent, const Environment1D &env, double world_x) {
  const double inv = 1.0 / (agent.acuity * agent.acuity);
  double acc = 0.0;
  for (const auto &l : env) {
    const double d = world_x - l.position;
    acc += l.intensity * std::exp(-d * d * inv);
  }
  return acc;
}

SmcTable scan_1d(const Agent1D &agent, const Environment1D &env, std::size_t n_nodes, double agent_pos) {
  agent.validate();
  if (n_nodes < 2) throw ConfigError("1D scan needs at least 2 nodes");
  std::vector<SmcSample> samples;
  std::vector<Vec2> truth;
  samples.reserve(n_nodes);
  truth.reserve(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n_nodes - 1);
    samples.push_back({ProprioVector{{Agent1D::proprio(x)}},
                       PhotoVector{{photo_response_1d(agent, env, agent_pos + x)}}});
    truth.push_back({x, 0.0});
  }
  return SmcTable(ScanLayout{n_nodes, 1, Box{{0.0, 0.0}, {1.0, 0.0}}}, std::move(samples), std::move(truth));
}

Environment1D shift_environment(const Environment1D &env, double delta) {
  Environment1D out = env;
  for (auto &l : out) l.position += delta;
  return out;
}

}  // namespace smspace
