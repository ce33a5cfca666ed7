#include "smspace/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "../phi/proprio_index.hpp"

namespace smspace::oracle {

PhiFunction oracle_phi(const AgentBody &body, const RigidDisplacement &relative, const ScanGrid &grid) {
  const Box &range = body.retina_range();
  const std::vector<Vec2> nodes = grid_nodes(grid, range);
  const Vec2 step = grid.spacing(range);
  constexpr double kSlack = 1e-9;

  PhiFunction phi;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Vec2 image = nodes[k] - relative.delta;
    if (!range.contains(image, kSlack)) continue;
    image = {std::clamp(image.x, range.lo.x, range.hi.x), std::clamp(image.y, range.lo.y, range.hi.y)};

    std::size_t image_index = kNoIndex;
    const double fx = (image.x - range.lo.x) / step.x;
    const double fy = (image.y - range.lo.y) / step.y;
    const double ix = std::round(fx), iy = std::round(fy);
    if (std::fabs(fx - ix) < 1e-6 && std::fabs(fy - iy) < 1e-6) {
      image_index = static_cast<std::size_t>(iy) * grid.nx + static_cast<std::size_t>(ix);
      image = nodes[image_index];
    }
    phi.pairs.push_back({proprio_response(body, nodes[k]), proprio_response(body, image), k, image_index});
  }
  return phi;
}

PhiFunction oracle_phi_1d(std::size_t n_nodes, double env_shift) {
  PhiFunction phi;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n_nodes - 1);
    const double image = x + env_shift;
    if (image < -1e-9 || image > 1.0 + 1e-9) continue;
    phi.pairs.push_back({ProprioVector{{Agent1D::proprio(x)}},
                         ProprioVector{{Agent1D::proprio(std::clamp(image, 0.0, 1.0))}}, k, kNoIndex});
  }
  return phi;
}

PhiFunction oracle_phi_audio(const HairCell &cell, std::size_t n_nodes, double k) {
  PhiFunction phi;
  const std::vector<double> freqs = cell.grid(n_nodes);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double image = k * freqs[i];
    if (image < cell.f_min * (1 - 1e-9) || image > cell.f_max * (1 + 1e-9)) continue;
    phi.pairs.push_back({ProprioVector{{cell.proprio(freqs[i])}},
                         ProprioVector{{cell.proprio(std::clamp(image, cell.f_min, cell.f_max))}}, i, kNoIndex});
  }
  return phi;
}

OracleComparison compare_with_oracle(const PhiFunction &learned, const PhiFunction &oracle_fn, double tol) {
  const detail::ProprioIndex index = detail::domain_index(oracle_fn);
  OracleComparison out;
  double sum = 0.0;
  for (const auto &pr : learned.pairs) {
    const auto hits = index.near(pr.p, tol);
    if (hits.empty()) {
      ++out.unmatched;
      continue;
    }
    double best = INFINITY;
    for (std::size_t i : hits) best = std::min(best, euclidean_distance(pr.p_image, oracle_fn.pairs[i].p_image));
    sum += best;
    out.max_discrepancy = std::max(out.max_discrepancy, best);
    ++out.compared;
  }
  if (out.compared > 0) out.mean_discrepancy = sum / static_cast<double>(out.compared);
  return out;
}

}  // namespace smspace::oracle
