#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "smspace/body.hpp"
#include "smspace/environment.hpp"
#include "smspace/rng.hpp"
#include "smspace/smc.hpp"

namespace smspace {

/// Regular grid of retina positions, both endpoints included.
struct ScanGrid {
  std::size_t nx = 201;
  std::size_t ny = 201;

  /// Throws ConfigError unless nx, ny >= 2.
  void validate() const;
  std::size_t size() const { return nx * ny; }
  /// Node spacing along x and y over `range`.
  Vec2 spacing(const Box &range) const;
};

/// Node positions in row-major order (index = iy * nx + ix).
std::vector<Vec2> grid_nodes(const ScanGrid &grid, const Box &range);

/// Eight proprioceptors placed unevenly over the tray. Every pair of nodes of
/// a 51x51 scan grid differs by more than 0.01 in at least one output.
inline constexpr std::array<Vec2, 8> kDefaultProprioceptorLayout{{
    {0.54, 0.45},
    {0.84, 0.33},
    {0.54, 0.90},
    {0.87, 0.69},
    {0.16, 0.73},
    {0.02, 0.48},
    {0.61, 0.14},
    {0.20, 0.18},
}};
inline constexpr double kProprioAcuity = 0.3;
inline constexpr std::size_t kPhotoreceptorCount = 9;
inline constexpr double kPhotoreceptorPatch = 0.3;
inline constexpr double kPhotoAcuityMin = 0.03;
inline constexpr double kPhotoAcuityMax = 0.3;

/// Default tray agent. Photoreceptor offsets are drawn from a 0.3 x 0.3 patch
/// around the retina center and acuities from [0.03, 0.3] using `rng`.
AgentBody make_default_body(CounterRng rng);

/// p_j = exp(-d_j^2 / sigma_j^2), d_j the distance from the retina center to
/// proprioceptor j. Throws RangeError outside the retina range.
ProprioVector proprio_response(const AgentBody &body, const Vec2 &retina_pos);

/// s_j = sum_i I_i exp(-d_ij^2 / sigma_j^2). Photoreceptor j sits at
/// agent_pos + retina_pos + offset_j. Throws RangeError outside the retina range.
PhotoVector photo_response(const Environment &env, const AgentBody &body, const Vec2 &agent_pos,
                           const Vec2 &retina_pos);

/// Move the retina over every grid node and tabulate <p, s>.
SmcTable scan(const Environment &env, const AgentBody &body, const Vec2 &agent_pos, const ScanGrid &grid);

/// Header p_1..p_P,s_1..s_S then one row per node.
void write_smc_csv(std::ostream &os, const SmcTable &table);

}  // namespace smspace
