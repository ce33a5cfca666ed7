#include "smspace/geometry.hpp"

#include <cmath>

namespace smspace {

RigidDisplacement compose_displacements(const RigidDisplacement &a, const RigidDisplacement &b) {
  return {a.delta + b.delta};
}

Vec2 apply(const RigidDisplacement &d, const Vec2 &p) { return p + d.delta; }

Vec2 snap_to_lattice(const Vec2 &v, double step) {
  return {std::round(v.x / step) * step, std::round(v.y / step) * step};
}

}  // namespace smspace
