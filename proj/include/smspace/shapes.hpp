#pragma once

#include <array>
#include <string>
#include <vector>

#include "smspace/environment.hpp"
#include "smspace/rng.hpp"

namespace smspace {

enum class ShapeKind { kCircle, kSquare, kTriangle, kStar };
inline constexpr std::array<ShapeKind, 4> kAllShapes{ShapeKind::kCircle, ShapeKind::kSquare, ShapeKind::kTriangle,
                                                     ShapeKind::kStar};

const char *to_string(ShapeKind kind);
/// circle|square|triangle|star; throws ConfigError otherwise.
ShapeKind shape_from_string(const std::string &name);

/// Object made of point lights. `size` is the radius (circle), side (square,
/// triangle) or ray length (star).
struct ObjectShape {
  ShapeKind kind = ShapeKind::kCircle;
  std::size_t n_lights = 40;
  double size = 0.1;
};

/// circle: 40 lights, radius 0.1. square: 40, side 0.2. triangle: 39, side
/// 0.2. star: 5 rays of 8 lights, ray 0.3.
ObjectShape standard_shape(ShapeKind kind);

/// Light positions around the origin (the centroid for the triangle).
std::vector<Vec2> shape_points(const ObjectShape &shape);

/// Lights of `shape` placed at `center`, x offsets scaled by `stretch_x`.
Environment make_object(const ObjectShape &shape, const Vec2 &center, double stretch_x = 1.0,
                        double intensity = 1.0);

/// `n` lights uniform in `box` with intensities uniform in [0.5, 1.5].
Environment random_environment(CounterRng &rng, std::size_t n, const Box &box);

/// Uniform point in `box`.
Vec2 uniform_in(CounterRng &rng, const Box &box);

}  // namespace smspace
