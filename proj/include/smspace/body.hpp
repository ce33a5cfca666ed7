#pragma once

#include <vector>

#include "smspace/geometry.hpp"

namespace smspace {

struct ProprioceptorSpec {
  Vec2 location;        // on the body surface
  double acuity = 0.3;  // Gaussian width
};

struct PhotoreceptorSpec {
  Vec2 offset;  // relative to the retina center
  double acuity = 0.1;
};

/// Tray-shaped body: a retina translating inside `retina_range`, sensed by
/// proprioceptors, carrying photoreceptors.
class AgentBody {
 public:
  /// Throws ConfigError on empty receptor lists, non-positive acuity or an
  /// empty retina range.
  AgentBody(std::vector<ProprioceptorSpec> proprioceptors, std::vector<PhotoreceptorSpec> photoreceptors,
            Box retina_range = Box::unit());

  const std::vector<ProprioceptorSpec> &proprioceptors() const { return proprioceptors_; }
  const std::vector<PhotoreceptorSpec> &photoreceptors() const { return photoreceptors_; }
  const Box &retina_range() const { return retina_range_; }

 private:
  std::vector<ProprioceptorSpec> proprioceptors_;
  std::vector<PhotoreceptorSpec> photoreceptors_;
  Box retina_range_;
};

}  // namespace smspace
