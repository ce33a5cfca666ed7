#include "smspace/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <tuple>

namespace smspace {

void finalize(TrialRecord &trial) {
  trial.decision = decide(trial.statistic, trial.threshold);
  trial.correct = trial.decision == trial.expected;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

void close_point(CurvePoint &pt) {
  pt.rate = pt.n ? static_cast<double>(pt.hits) / static_cast<double>(pt.n) : 0.0;
  std::tie(pt.ci_lo, pt.ci_hi) = wilson_interval(pt.hits, pt.n);
}

}  // namespace

Curve binned_rate(std::string name, std::string x_label, std::string y_label, const std::vector<TrialRecord> &trials,
                  const TrialFilter &filter, const TrialValue &x, const TrialFlag &flag,
                  const std::vector<double> &edges) {
  Curve c{std::move(name), std::move(x_label), std::move(y_label), {}};
  if (edges.size() < 2) return c;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    c.points.push_back({0.5 * (edges[i] + edges[i + 1]), edges[i], edges[i + 1]});
  }
  for (const auto &t : trials) {
    if (filter && !filter(t)) continue;
    const double v = x(t);
    if (v < edges.front() || v > edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    bin = std::min(bin, c.points.size() - 1);
    ++c.points[bin].n;
    if (flag(t)) ++c.points[bin].hits;
  }
  for (auto &pt : c.points) close_point(pt);
  return c;
}

Curve rate_by_value(std::string name, std::string x_label, std::string y_label, const std::vector<TrialRecord> &trials,
                    const TrialFilter &filter, const TrialValue &x, const TrialFlag &flag) {
  std::vector<std::pair<double, bool>> obs;
  for (const auto &t : trials) {
    if (!filter || filter(t)) obs.emplace_back(x(t), flag(t));
  }
  std::stable_sort(obs.begin(), obs.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  Curve c{std::move(name), std::move(x_label), std::move(y_label), {}};
  for (const auto &[v, hit] : obs) {
    if (c.points.empty() || v - c.points.back().x_hi > 1e-9) c.points.push_back({v, v, v});
    auto &pt = c.points.back();
    pt.x_hi = v;
    ++pt.n;
    if (hit) ++pt.hits;
  }
  for (auto &pt : c.points) close_point(pt);
  return c;
}

nlohmann::json to_json(const TrialRecord &t) {
  nlohmann::json d = nlohmann::json::array();
  for (const auto &v : t.displacements) d.push_back({v.x, v.y});
  nlohmann::json j{
      {"index", t.index},
      {"seed", t.seed},
      {"displacements", std::move(d)},
      {"phi_ids", t.phi_ids},
      {"threshold", t.threshold},
      {"decision", t.decision},
      {"expected", t.expected},
      {"correct", t.correct},
      {"variable", t.variable},
  };
  j["statistic"] = t.statistic ? nlohmann::json(*t.statistic) : nlohmann::json(nullptr);
  if (!t.group.empty()) j["group"] = t.group;
  if (!t.extra.empty()) j["extra"] = t.extra;
  return j;
}

nlohmann::json to_json(const ExperimentReport &r) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto &t : r.trials) trials.push_back(to_json(t));
  nlohmann::json curves = nlohmann::json::array();
  for (const auto &c : r.curves) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto &p : c.points) {
      pts.push_back({{"x", p.x},
                     {"x_lo", p.x_lo},
                     {"x_hi", p.x_hi},
                     {"n", p.n},
                     {"hits", p.hits},
                     {"rate", p.rate},
                     {"ci_lo", p.ci_lo},
                     {"ci_hi", p.ci_hi}});
    }
    curves.push_back({{"name", c.name}, {"x_label", c.x_label}, {"y_label", c.y_label}, {"points", std::move(pts)}});
  }
  return {{"experiment", r.experiment}, {"seed", r.seed},       {"config", r.config},
          {"summary", r.summary},       {"curves", curves},     {"trials", std::move(trials)},
          {"n_trials", r.trials.size()}};
}

void write_report_json(std::ostream &os, const ExperimentReport &report) { os << to_json(report).dump(1) << '\n'; }

void write_curves_csv(std::ostream &os, const ExperimentReport &report) {
  os << "curve,x,x_lo,x_hi,n,hits,rate,ci_lo,ci_hi\n";
  os << std::setprecision(17);
  for (const auto &c : report.curves) {
    for (const auto &p : c.points) {
      os << c.name << ',' << p.x << ',' << p.x_lo << ',' << p.x_hi << ',' << p.n << ',' << p.hits << ',' << p.rate
         << ',' << p.ci_lo << ',' << p.ci_hi << '\n';
    }
  }
}

}  // namespace smspace
