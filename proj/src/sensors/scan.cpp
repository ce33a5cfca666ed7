#include <cmath>

#include "smspace/errors.hpp"
#include "smspace/sensors.hpp"

namespace smspace {

void ScanGrid::validate() const {
  if (nx < 2 || ny < 2) throw ConfigError("scan grid needs at least 2 nodes per axis");
}

Vec2 ScanGrid::spacing(const Box &range) const {
  const Vec2 e = range.extent();
  return {e.x / static_cast<double>(nx - 1), e.y / static_cast<double>(ny - 1)};
}

namespace {

double node_coordinate(double lo, double hi, std::size_t i, std::size_t n) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

std::vector<Vec2> grid_nodes(const ScanGrid &grid, const Box &range) {
  grid.validate();
  std::vector<Vec2> nodes;
  nodes.reserve(grid.size());
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    const double y = node_coordinate(range.lo.y, range.hi.y, iy, grid.ny);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      nodes.push_back({node_coordinate(range.lo.x, range.hi.x, ix, grid.nx), y});
    }
  }
  return nodes;
}

SmcTable scan(const Environment &env, const AgentBody &body, const Vec2 &agent_pos, const ScanGrid &grid) {
  grid.validate();
  const Box &range = body.retina_range();
  const std::vector<Vec2> nodes = grid_nodes(grid, range);
  const std::size_t n = nodes.size();
  const std::size_t m = env.size();
  const auto &photo = body.photoreceptors();

  std::vector<SmcSample> samples(n);
  for (std::size_t k = 0; k < n; ++k) {
    samples[k].p = proprio_response(body, nodes[k]);
    samples[k].s.values.assign(photo.size(), 0.0);
  }

  // The Gaussian factorizes over axes on a regular grid:
  // exp(-(dx^2 + dy^2)/s^2) = exp(-dx^2/s^2) * exp(-dy^2/s^2).
  std::vector<double> ex(grid.nx * m);
  std::vector<double> weighted(m);
  for (std::size_t j = 0; j < photo.size(); ++j) {
    const double inv = 1.0 / (photo[j].acuity * photo[j].acuity);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const double wx = agent_pos.x + nodes[ix].x + photo[j].offset.x;
      for (std::size_t i = 0; i < m; ++i) {
        const double dx = wx - env.sources()[i].position.x;
        ex[ix * m + i] = std::exp(-dx * dx * inv);
      }
    }
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
      const double wy = agent_pos.y + nodes[iy * grid.nx].y + photo[j].offset.y;
      for (std::size_t i = 0; i < m; ++i) {
        const double dy = wy - env.sources()[i].position.y;
        weighted[i] = env.sources()[i].intensity * std::exp(-dy * dy * inv);
      }
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const double *row = &ex[ix * m];
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += row[i] * weighted[i];
        samples[iy * grid.nx + ix].s[j] = acc;
      }
    }
  }
  return SmcTable(ScanLayout{grid.nx, grid.ny, range}, std::move(samples), nodes);
}

}  // namespace smspace
