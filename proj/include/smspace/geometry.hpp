#pragma once

#include <cmath>

namespace smspace {

/// Point or vector in the agent's plane.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double k, const Vec2 &a) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

inline double squared_norm(const Vec2 &v) { return v.x * v.x + v.y * v.y; }
inline double norm(const Vec2 &v) { return std::sqrt(squared_norm(v)); }
inline double chebyshev_norm(const Vec2 &v) { return std::fmax(std::fabs(v.x), std::fabs(v.y)); }
inline bool is_finite(const Vec2 &v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Axis-aligned closed box.
struct Box {
  Vec2 lo;
  Vec2 hi;

  static constexpr Box unit() { return {{0.0, 0.0}, {1.0, 1.0}}; }
  static constexpr Box centered(Vec2 center, double side) {
    return {{center.x - side / 2, center.y - side / 2}, {center.x + side / 2, center.y + side / 2}};
  }

  Vec2 extent() const { return hi - lo; }
  Vec2 center() const { return 0.5 * (lo + hi); }
  bool contains(const Vec2 &p, double slack = 0.0) const {
    return p.x >= lo.x - slack && p.x <= hi.x + slack && p.y >= lo.y - slack && p.y <= hi.y + slack;
  }
  friend constexpr bool operator==(const Box &, const Box &) = default;
};

/// Translation of the plane. The only rigid motion this agent can compensate.
struct RigidDisplacement {
  Vec2 delta;

  static constexpr RigidDisplacement identity() { return {}; }
  RigidDisplacement inverse() const { return {-delta}; }
  friend constexpr bool operator==(const RigidDisplacement &, const RigidDisplacement &) = default;
};

/// Group composition: apply `a`, then `b`.
RigidDisplacement compose_displacements(const RigidDisplacement &a, const RigidDisplacement &b);

Vec2 apply(const RigidDisplacement &d, const Vec2 &p);

/// Round each component to the nearest multiple of `step`.
Vec2 snap_to_lattice(const Vec2 &v, double step);

}  // namespace smspace
