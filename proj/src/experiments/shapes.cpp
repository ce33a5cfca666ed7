#include "smspace/shapes.hpp"

#include <cmath>
#include <numbers>

#include "smspace/errors.hpp"

namespace smspace {

const char *to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kCircle: return "circle";
    case ShapeKind::kSquare: return "square";
    case ShapeKind::kTriangle: return "triangle";
    case ShapeKind::kStar: return "star";
  }
  return "unknown";
}

ShapeKind shape_from_string(const std::string &name) {
  for (ShapeKind k : kAllShapes) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown shape \"" + name + "\" (expected circle|square|triangle|star)");
}

ObjectShape standard_shape(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kCircle: return {kind, 40, 0.1};
    case ShapeKind::kSquare: return {kind, 40, 0.2};
    case ShapeKind::kTriangle: return {kind, 39, 0.2};
    case ShapeKind::kStar: return {kind, 40, 0.3};
  }
  return {};
}

namespace {

// n points evenly spaced along a closed polygon, starting at the first vertex.
std::vector<Vec2> along_polygon(const std::vector<Vec2> &vertices, std::size_t n) {
  std::vector<Vec2> out;
  const std::size_t sides = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * static_cast<double>(sides) / static_cast<double>(n);
    const auto side = static_cast<std::size_t>(t);
    const double u = t - static_cast<double>(side);
    const Vec2 &a = vertices[side];
    const Vec2 &b = vertices[(side + 1) % sides];
    out.push_back(a + u * (b - a));
  }
  return out;
}

}  // namespace

std::vector<Vec2> shape_points(const ObjectShape &shape) {
  using std::numbers::pi;
  const double s = shape.size;
  switch (shape.kind) {
    case ShapeKind::kCircle: {
      std::vector<Vec2> out;
      for (std::size_t i = 0; i < shape.n_lights; ++i) {
        const double a = 2 * pi * static_cast<double>(i) / static_cast<double>(shape.n_lights);
        out.push_back({s * std::cos(a), s * std::sin(a)});
      }
      return out;
    }
    case ShapeKind::kSquare:
      return along_polygon({{-s / 2, -s / 2}, {s / 2, -s / 2}, {s / 2, s / 2}, {-s / 2, s / 2}}, shape.n_lights);
    case ShapeKind::kTriangle: {
      const double h = s * std::sqrt(3.0) / 2;
      return along_polygon({{-s / 2, -h / 3}, {s / 2, -h / 3}, {0.0, 2 * h / 3}}, shape.n_lights);
    }
    case ShapeKind::kStar: {
      std::vector<Vec2> out;
      const std::size_t per_ray = shape.n_lights / 5;
      for (std::size_t r = 0; r < 5; ++r) {
        const double a = pi / 2 + 2 * pi * static_cast<double>(r) / 5;
        for (std::size_t k = 1; k <= per_ray; ++k) {
          const double len = s * static_cast<double>(k) / static_cast<double>(per_ray);
          out.push_back({len * std::cos(a), len * std::sin(a)});
        }
      }
      return out;
    }
  }
  return {};
}

Environment make_object(const ObjectShape &shape, const Vec2 &center, double stretch_x, double intensity) {
  std::vector<LightSource> lights;
  for (const auto &p : shape_points(shape)) lights.push_back({{center.x + stretch_x * p.x, center.y + p.y}, intensity});
  return Environment(std::move(lights));
}

Vec2 uniform_in(CounterRng &rng, const Box &box) {
  const double x = rng.uniform(box.lo.x, box.hi.x);
  const double y = rng.uniform(box.lo.y, box.hi.y);
  return {x, y};
}

Environment random_environment(CounterRng &rng, std::size_t n, const Box &box) {
  std::vector<LightSource> lights;
  lights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 pos = uniform_in(rng, box);
    lights.push_back({pos, rng.uniform(0.5, 1.5)});
  }
  return Environment(std::move(lights));
}

}  // namespace smspace
