#include "smspace/audio.hpp"

#include <cmath>
#include <string>

#include "smspace/agent1d.hpp"
#include "smspace/errors.hpp"

namespace smspace {

void Chord::validate() const {
  for (const auto &n : notes) {
    if (!(n.freq > 0.0) || !std::isfinite(n.freq)) throw ConfigError("note frequency must be > 0");
    if (!(n.amp >= 0.0) || !std::isfinite(n.amp)) throw ConfigError("note amplitude must be >= 0");
  }
}

Chord transpose(const Chord &chord, double k) {
  if (!(k > 0.0)) throw ConfigError("transposition factor must be > 0");
  Chord out = chord;
  for (auto &n : out.notes) n.freq *= k;
  return out;
}

void HairCell::validate() const {
  if (!(f_min > 0.0 && f_min < f_max) || !std::isfinite(f_max)) throw ConfigError("hair cell needs 0 < f_min < f_max");
  if (!(width > 0.0) || !std::isfinite(width)) throw ConfigError("hair cell width must be > 0");
}

double HairCell::proprio(double f) const {
  return Agent1D::proprio(std::log(f / f_min) / std::log(f_max / f_min));
}

double HairCell::proprio_inverse(double p) const {
  return f_min * std::exp(Agent1D::proprio_inverse(p) * std::log(f_max / f_min));
}

std::vector<double> HairCell::grid(std::size_t n_nodes) const {
  if (n_nodes < 2) throw ConfigError("audio scan needs at least 2 nodes");
  const double span = std::log(f_max / f_min);
  std::vector<double> out(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    out[k] = f_min * std::exp(span * static_cast<double>(k) / static_cast<double>(n_nodes - 1));
  }
  out.back() = f_max;
  return out;
}

double haircell_response(const Chord &chord, const HairCell &cell, double f_eigen) {
  const double slack = 1e-12 * cell.f_max;
  if (!(f_eigen >= cell.f_min - slack && f_eigen <= cell.f_max + slack)) {
    throw RangeError("eigenfrequency " + std::to_string(f_eigen) + " Hz outside the hair cell range");
  }
  const double inv = 1.0 / (cell.width * cell.width);
  double s = 0.0;
  for (const auto &n : chord.notes) {
    const double l = std::log(n.freq / f_eigen);
    s += n.amp * std::exp(-l * l * inv);
  }
  return s;
}

SmcTable audio_scan(const Chord &chord, const HairCell &cell, std::size_t n_nodes) {
  cell.validate();
  chord.validate();
  const std::vector<double> freqs = cell.grid(n_nodes);
  std::vector<SmcSample> samples;
  std::vector<Vec2> truth;
  samples.reserve(n_nodes);
  truth.reserve(n_nodes);
  const double span = std::log(cell.f_max / cell.f_min);
  for (double f : freqs) {
    samples.push_back({ProprioVector{{cell.proprio(f)}}, PhotoVector{{haircell_response(chord, cell, f)}}});
    truth.push_back({std::log(f / cell.f_min), 0.0});
  }
  return SmcTable(ScanLayout{n_nodes, 1, Box{{0.0, 0.0}, {span, 0.0}}}, std::move(samples), std::move(truth));
}

PhiFunction audio_learn_phi(const Chord &before, const Chord &after, const HairCell &cell, std::size_t n_nodes,
                            const MatchConfig &cfg) {
  return learn_phi(audio_scan(before, cell, n_nodes), audio_scan(after, cell, n_nodes), cfg);
}

MatchConfig audio_match_config(double photo_tol) {
  MatchConfig cfg;
  cfg.photo_tol = photo_tol;
  cfg.dedup_tol = 0.002;
  cfg.policy = CoincidencePolicy::kUnambiguous;
  cfg.context_radius = 3;
  return cfg;
}

nlohmann::json chord_to_json(const Chord &chord) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &n : chord.notes) out.push_back({{"freq", n.freq}, {"amp", n.amp}});
  return out;
}

Chord chord_from_json(const nlohmann::json &doc) {
  if (!doc.is_array()) throw ConfigError("chord: expected a JSON list of {freq, amp}");
  Chord chord;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto &item = doc[i];
    const std::string where = "chord[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("freq") || !item["freq"].is_number()) {
      throw ConfigError(where + ".freq: missing or not a number");
    }
    Note n{item["freq"].get<double>(), 1.0};
    if (item.contains("amp")) {
      if (!item["amp"].is_number()) throw ConfigError(where + ".amp: not a number");
      n.amp = item["amp"].get<double>();
    }
    chord.notes.push_back(n);
  }
  chord.validate();
  return chord;
}

}  // namespace smspace
