#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <vector>

#include "smspace/smc.hpp"

namespace smspace::detail {

// Sorted index over a set of proprioception vectors, keyed on the component
// with the widest spread. near() returns every entry within tol componentwise.
class ProprioIndex {
 public:
  explicit ProprioIndex(std::vector<const ProprioVector *> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    const std::size_t dim = points_.front()->size();
    double best = -1.0;
    for (std::size_t c = 0; c < dim; ++c) {
      double lo = (*points_.front())[c], hi = lo;
      for (const auto *p : points_) {
        lo = std::min(lo, (*p)[c]);
        hi = std::max(hi, (*p)[c]);
      }
      if (hi - lo > best) {
        best = hi - lo;
        key_ = c;
      }
    }
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return (*points_[a])[key_] < (*points_[b])[key_]; });
    for (std::size_t i : order_) keys_.push_back((*points_[i])[key_]);
  }

  // Ascending entry indices.
  std::vector<std::size_t> near(const ProprioVector &q, double tol) const {
    std::vector<std::size_t> out;
    if (keys_.empty() || q.size() != points_.front()->size()) return out;
    const double slack = 4.0 * DBL_EPSILON * (std::fabs(q[key_]) + tol);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), q[key_] - tol - slack);
    for (; it != keys_.end() && *it <= q[key_] + tol + slack; ++it) {
      const std::size_t i = order_[static_cast<std::size_t>(it - keys_.begin())];
      if (within(q, *points_[i], tol)) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<const ProprioVector *> points_;
  std::size_t key_ = 0;
  std::vector<std::size_t> order_;
  std::vector<double> keys_;
};

inline ProprioIndex domain_index(const PhiFunction &phi) {
  std::vector<const ProprioVector *> pts;
  pts.reserve(phi.size());
  for (const auto &pr : phi.pairs) pts.push_back(&pr.p);
  return ProprioIndex(std::move(pts));
}

}  // namespace smspace::detail
