#pragma once

// Ground-truth geometry for tests and verification. Nothing on the learning
// path may include this header.

#include <span>

#include "smspace/agent1d.hpp"
#include "smspace/audio.hpp"
#include "smspace/phi.hpp"
#include "smspace/sensors.hpp"

namespace smspace::oracle {

/// The only way to read true sensor positions out of a scan table.
class TruthView {
 public:
  static std::span<const Vec2> positions(const SmcTable &table) { return table.truth_; }
};

/// The phi a noise-free, rich environment would produce when the agent moves
/// by `relative.delta` relative to the environment (equivalently, the
/// environment moves by -delta): every node x with x - delta inside the retina
/// range is paired as <p(x), p(x - delta)>.
PhiFunction oracle_phi(const AgentBody &body, const RigidDisplacement &relative, const ScanGrid &grid);

/// 1D agent, environment shifted by `env_shift`: <p(x), p(x + env_shift)> for
/// every scan node x whose image stays inside [0, 1].
PhiFunction oracle_phi_1d(std::size_t n_nodes, double env_shift);

/// Hair cell, input transposed by k: <p(f), p(k f)> over the scan nodes.
PhiFunction oracle_phi_audio(const HairCell &cell, std::size_t n_nodes, double k);

struct OracleComparison {
  double mean_discrepancy = 0.0;  // mean ||p'_learned - p'_oracle|| over compared pairs
  double max_discrepancy = 0.0;
  std::size_t compared = 0;       // learned pairs with a matching oracle domain point
  std::size_t unmatched = 0;      // learned pairs outside the oracle domain
};

/// Compare a learned phi with an oracle phi point by point. Domain points are
/// matched within `tol` componentwise; the nearest oracle image is used.
OracleComparison compare_with_oracle(const PhiFunction &learned, const PhiFunction &oracle_fn, double tol = 0.01);

}  // namespace smspace::oracle
