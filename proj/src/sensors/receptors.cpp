#include <cmath>
#include <sstream>

#include "smspace/errors.hpp"
#include "smspace/sensors.hpp"

namespace smspace {

namespace {

void require_in_range(const AgentBody &body, const Vec2 &retina_pos) {
  if (!is_finite(retina_pos) || !body.retina_range().contains(retina_pos, 1e-12)) {
    std::ostringstream msg;
    msg << "retina position (" << retina_pos.x << ", " << retina_pos.y << ") outside the retina range";
    throw RangeError(msg.str());
  }
}

}  // namespace

AgentBody make_default_body(CounterRng rng) {
  std::vector<ProprioceptorSpec> proprio;
  for (const auto &loc : kDefaultProprioceptorLayout) proprio.push_back({loc, kProprioAcuity});

  std::vector<PhotoreceptorSpec> photo;
  const double half = kPhotoreceptorPatch / 2;
  for (std::size_t j = 0; j < kPhotoreceptorCount; ++j) {
    const double x = rng.uniform(-half, half);
    const double y = rng.uniform(-half, half);
    const double acuity = rng.uniform(kPhotoAcuityMin, kPhotoAcuityMax);
    photo.push_back({{x, y}, acuity});
  }
  return AgentBody(std::move(proprio), std::move(photo), Box::unit());
}

ProprioVector proprio_response(const AgentBody &body, const Vec2 &retina_pos) {
  require_in_range(body, retina_pos);
  ProprioVector p;
  p.values.reserve(body.proprioceptors().size());
  for (const auto &r : body.proprioceptors()) {
    const double d2 = squared_norm(retina_pos - r.location);
    p.values.push_back(std::exp(-d2 / (r.acuity * r.acuity)));
  }
  return p;
}

PhotoVector photo_response(const Environment &env, const AgentBody &body, const Vec2 &agent_pos,
                           const Vec2 &retina_pos) {
  require_in_range(body, retina_pos);
  PhotoVector s;
  s.values.reserve(body.photoreceptors().size());
  for (const auto &r : body.photoreceptors()) {
    const Vec2 world = agent_pos + retina_pos + r.offset;
    const double inv = 1.0 / (r.acuity * r.acuity);
    double acc = 0.0;
    for (const auto &src : env.sources()) {
      acc += src.intensity * std::exp(-squared_norm(world - src.position) * inv);
    }
    s.values.push_back(acc);
  }
  return s;
}

}  // namespace smspace
