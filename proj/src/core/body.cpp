#include "smspace/body.hpp"

#include <cmath>
#include <string>

#include "smspace/errors.hpp"

namespace smspace {

AgentBody::AgentBody(std::vector<ProprioceptorSpec> proprioceptors, std::vector<PhotoreceptorSpec> photoreceptors,
                     Box retina_range)
    : proprioceptors_(std::move(proprioceptors)),
      photoreceptors_(std::move(photoreceptors)),
      retina_range_(retina_range) {
  if (proprioceptors_.empty()) throw ConfigError("agent body needs at least one proprioceptor");
  if (photoreceptors_.empty()) throw ConfigError("agent body needs at least one photoreceptor");
  for (std::size_t j = 0; j < proprioceptors_.size(); ++j) {
    const auto &p = proprioceptors_[j];
    if (!(p.acuity > 0.0) || !std::isfinite(p.acuity) || !is_finite(p.location)) {
      throw ConfigError("proprioceptor " + std::to_string(j) + " needs finite location and acuity > 0");
    }
  }
  for (std::size_t j = 0; j < photoreceptors_.size(); ++j) {
    const auto &p = photoreceptors_[j];
    if (!(p.acuity > 0.0) || !std::isfinite(p.acuity) || !is_finite(p.offset)) {
      throw ConfigError("photoreceptor " + std::to_string(j) + " needs finite offset and acuity > 0");
    }
  }
  if (!(retina_range_.hi.x > retina_range_.lo.x) || !(retina_range_.hi.y > retina_range_.lo.y)) {
    throw ConfigError("retina range must have positive extent");
  }
}

}  // namespace smspace
