#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "smspace/geometry.hpp"

namespace smspace {

/// The rule every experiment decides by. An undefined statistic never passes.
inline bool decide(const std::optional<double> &statistic, double threshold) {
  return statistic.has_value() && *statistic <= threshold;
}

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string group;                   // shape, segment count, ... ("" if none)
  std::vector<Vec2> displacements;     // ground truth, experiment specific order
  std::vector<std::string> phi_ids;
  std::optional<double> statistic;     // rho or epsilon
  double threshold = 0.0;
  bool decision = false;               // statistic <= threshold
  bool expected = false;               // what the ground truth calls for
  bool correct = false;
  double variable = 0.0;               // independent variable of the curves
  nlohmann::json extra = nlohmann::json::object();
};

/// Fill in decision and correct from statistic, threshold and expected.
void finalize(TrialRecord &trial);

struct CurvePoint {
  double x = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t n = 0;
  std::size_t hits = 0;
  double rate = 0.0;
  double ci_lo = 0.0;  // Wilson 95% interval
  double ci_hi = 0.0;
};

struct Curve {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<CurvePoint> points;
};

/// Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.96);

using TrialFilter = std::function<bool(const TrialRecord &)>;
using TrialValue = std::function<double(const TrialRecord &)>;
using TrialFlag = std::function<bool(const TrialRecord &)>;

/// Rate of `flag` among filtered trials, binned by `x` over [edges[i], edges[i+1]).
/// The last bin is closed. Empty bins are kept with n = 0.
Curve binned_rate(std::string name, std::string x_label, std::string y_label, const std::vector<TrialRecord> &trials,
                  const TrialFilter &filter, const TrialValue &x, const TrialFlag &flag,
                  const std::vector<double> &edges);

/// Same, with one point per distinct x value (values closer than 1e-9 merge).
Curve rate_by_value(std::string name, std::string x_label, std::string y_label, const std::vector<TrialRecord> &trials,
                    const TrialFilter &filter, const TrialValue &x, const TrialFlag &flag);

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<TrialRecord> trials;
  std::vector<Curve> curves;
  nlohmann::json summary = nlohmann::json::object();
};

nlohmann::json to_json(const TrialRecord &trial);
nlohmann::json to_json(const ExperimentReport &report);

void write_report_json(std::ostream &os, const ExperimentReport &report);
/// curve,x,x_lo,x_hi,n,hits,rate,ci_lo,ci_hi
void write_curves_csv(std::ostream &os, const ExperimentReport &report);

}  // namespace smspace
