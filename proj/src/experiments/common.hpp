#pragma once

#include <string>

#include "smspace/experiments.hpp"

namespace smspace::detail {

// Sub-streams of a run seed.
inline constexpr std::uint64_t kBodyStream = 1;
inline constexpr std::uint64_t kCalibrationStream = 2;
inline constexpr std::uint64_t kValidationStream = 3;
inline constexpr std::uint64_t kAtlasStream = 4;
inline constexpr std::uint64_t kGroupLawStream = 5;

inline constexpr std::size_t kRichSources = 200;
inline constexpr double kRichSide = 3.0;

/// 200 sources in the 3x3 square around `center`.
Environment rich_environment(CounterRng &rng, const Vec2 &center);

nlohmann::json threshold_json(const PhiThreshold &th);
nlohmann::json context_json(const ExperimentContext &ctx);
nlohmann::json vec_json(const Vec2 &v);

/// Proprio change field of a phi, drawn on its first two components.
svg::Panel phi_field_panel(const PhiFunction &phi, std::string title, std::size_t max_arrows = 400);

/// Curve of `rate` against `x` for plotting.
svg::Panel curve_panel(const std::vector<Curve> &curves, std::string title);

std::string fmt(double v, int precision = 3);

}  // namespace smspace::detail
