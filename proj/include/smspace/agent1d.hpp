#pragma once

#include <vector>

#include "smspace/smc.hpp"

namespace smspace {

struct Light1D {
  double position = 0.0;
  double intensity = 1.0;
};
using Environment1D = std::vector<Light1D>;

/// Single photoreceptor sliding over [0, 1] inside a one-dimensional tray.
/// The muscle is read out through a fixed smooth monotone map unknown to the
/// agent: p(x) = 1/2 + tanh(k (x - 1/2)) / (2 tanh(k / 2)), k = 1.5.
struct Agent1D {
  double acuity = 0.05;

  /// Throws ConfigError unless acuity > 0.
  void validate() const;
  static double proprio(double x);
  static double proprio_inverse(double p);
  /// dp/dx.
  static double proprio_slope(double x);
};

double photo_response_1d(const Agent1D &agent, const Environment1D &env, double world_x);

/// Scan `n_nodes` evenly spaced sensor positions over [0, 1] with the tray at
/// `agent_pos`. Throws ConfigError when n_nodes < 2.
SmcTable scan_1d(const Agent1D &agent, const Environment1D &env, std::size_t n_nodes, double agent_pos = 0.0);

Environment1D shift_environment(const Environment1D &env, double delta);

}  // namespace smspace
