#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "smspace/geometry.hpp"

namespace smspace {

namespace oracle {
class TruthView;
}

/// Receptor output vector. The tag keeps proprioception and exteroception
/// from being mixed up.
template <class Tag>
struct SensorVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double &operator[](std::size_t i) { return values[i]; }
  friend bool operator==(const SensorVector &, const SensorVector &) = default;
};

struct ProprioTag;
struct PhotoTag;
using ProprioVector = SensorVector<ProprioTag>;
using PhotoVector = SensorVector<PhotoTag>;

/// Largest componentwise absolute difference. Sizes must agree.
template <class Tag>
double max_abs_diff(const SensorVector<Tag> &a, const SensorVector<Tag> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    if (d > m) m = d;
  }
  return m;
}

/// True when every component differs by strictly less than `tol`.
template <class Tag>
bool within(const SensorVector<Tag> &a, const SensorVector<Tag> &b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!(d < tol && -d < tol)) return false;
  }
  return true;
}

template <class Tag>
double euclidean_distance(const SensorVector<Tag> &a, const SensorVector<Tag> &b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

struct SmcSample {
  ProprioVector p;
  PhotoVector s;
};

/// Shape of the motor scan that produced a table: `nx * ny` nodes in
/// row-major order (index = iy * nx + ix) over `range`. One-dimensional scans
/// have ny == 1.
struct ScanLayout {
  std::size_t nx = 0;
  std::size_t ny = 1;
  Box range = Box::unit();

  std::size_t size() const { return nx * ny; }
  bool is_1d() const { return ny == 1; }
};

/// Tabulated sensorimotor contingency. Learning code sees only p and s; the
/// true sensor positions are reachable through oracle::TruthView alone.
class SmcTable {
 public:
  SmcTable(ScanLayout layout, std::vector<SmcSample> samples, std::vector<Vec2> truth);

  const ScanLayout &layout() const { return layout_; }
  std::span<const SmcSample> samples() const { return samples_; }
  const SmcSample &operator[](std::size_t k) const { return samples_[k]; }
  std::size_t size() const { return samples_.size(); }
  std::size_t proprio_size() const { return samples_.empty() ? 0 : samples_.front().p.size(); }
  std::size_t photo_size() const { return samples_.empty() ? 0 : samples_.front().s.size(); }

 private:
  ScanLayout layout_;
  std::vector<SmcSample> samples_;
  std::vector<Vec2> truth_;

  friend class oracle::TruthView;
};

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// One coincidence: proprioception before the change and after it. The
/// indices are positions in the agent's own scan sequence (kNoIndex when the
/// pair does not come from a scan).
struct PhiPair {
  ProprioVector p;
  ProprioVector p_image;
  std::size_t domain_index = kNoIndex;
  std::size_t image_index = kNoIndex;
};

/// A sensible rigid displacement: a finite set of proprioception pairs.
/// May be empty when the two scans share no coincidences.
struct PhiFunction {
  std::vector<PhiPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

}  // namespace smspace
