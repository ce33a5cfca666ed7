#include <cmath>

#include "common.hpp"
#include "smspace/errors.hpp"
#include "smspace/parallel.hpp"

namespace smspace {

namespace {

Note random_note(CounterRng &rng, const AudioOptions &opt) {
  const double f = opt.note_lo * std::exp(rng.uniform() * std::log(opt.note_hi / opt.note_lo));
  return {f, rng.uniform(0.5, 1.5)};
}

Chord random_chord(CounterRng &rng, const AudioOptions &opt, std::size_t notes) {
  Chord c;
  for (std::size_t i = 0; i < notes; ++i) c.notes.push_back(random_note(rng, opt));
  return c;
}

double semitones(int n) { return std::exp2(static_cast<double>(n) / 12.0); }

int random_interval(CounterRng &rng, int max_semitones) {
  return static_cast<int>(rng.below(static_cast<std::size_t>(2 * max_semitones + 1))) - max_semitones;
}

std::vector<Vec2> response_curve(const SmcTable &t) {
  std::vector<Vec2> pts;
  for (const auto &s : t.samples()) pts.push_back({s.p[0], s.s[0]});
  return pts;
}

}  // namespace

ExperimentOutput run_audio(std::uint64_t seed, const AudioOptions &opt, std::size_t threads) {
  opt.cell.validate();
  if (opt.n_nodes < 2) throw ConfigError("audio.n_nodes must be >= 2");
  if (!(opt.note_lo > 0.0 && opt.note_lo < opt.note_hi)) throw ConfigError("audio: need 0 < note_lo < note_hi");
  if (opt.max_semitones < 0) throw ConfigError("audio.max_semitones must be >= 0");
  const double spacing = std::log(opt.cell.f_max / opt.cell.f_min) / static_cast<double>(opt.n_nodes - 1);
  const double per_semitone = std::log(2.0) / 12.0 / spacing;
  if (std::fabs(per_semitone - std::round(per_semitone)) > 1e-6) {
    throw ConfigError("audio: a semitone must be a whole number of scan steps (check n_nodes, f_min, f_max)");
  }
  const MatchConfig cfg = audio_match_config(opt.photo_tol);
  auto learn = [&](const Chord &a, const Chord &b) { return audio_learn_phi(a, b, opt.cell, opt.n_nodes, cfg); };

  // Threshold: a single note against a note or chord, the second transposition
  // off by less than 0.005 in log-frequency, rounded to the scan lattice.
  if (opt.calibration_trials < 20) throw ConfigError("audio.calibration_trials must be >= 20");
  const std::uint64_t cal_seed = stream_seed(seed, detail::kCalibrationStream);
  std::vector<std::optional<double>> cal(opt.calibration_trials);
  parallel_for(cal.size(), threads, [&](std::size_t i) {
    CounterRng rng(trial_seed(cal_seed, i));
    const Chord note = random_chord(rng, opt, 1);
    const Chord other = random_chord(rng, opt, 1 + rng.below(2));
    const int n = random_interval(rng, opt.max_semitones);
    const double wobble = std::round(rng.uniform(-0.005, 0.005) / spacing) * spacing;
    cal[i] = phi_distance(learn(note, transpose(note, semitones(n))),
                          learn(other, transpose(other, semitones(n) * std::exp(wobble))), cfg.dedup_tol);
  });
  std::vector<double> defined;
  for (const auto &d : cal) {
    if (d) defined.push_back(*d);
  }
  PhiThreshold th;
  th.quantile = opt.quantile;
  th.n_trials = cal.size();
  th.n_undefined = cal.size() - defined.size();
  if (2 * th.n_undefined > th.n_trials) throw CalibrationError("audio: most calibration trials had no shared domain");
  th.value = coverage_quantile(std::move(defined), cal.size(), th.quantile);

  ExperimentOutput out;
  auto &r = out.report;
  r.experiment = "audio";
  r.seed = seed;
  r.config = {{"f_min", opt.cell.f_min},
              {"f_max", opt.cell.f_max},
              {"width", opt.cell.width},
              {"n_nodes", opt.n_nodes},
              {"n_trials", opt.n_trials},
              {"calibration_trials", opt.calibration_trials},
              {"group_cases", opt.group_cases},
              {"note_lo", opt.note_lo},
              {"note_hi", opt.note_hi},
              {"max_semitones", opt.max_semitones},
              {"photo_tol", cfg.photo_tol},
              {"quantile", opt.quantile},
              {"dedup_tol", cfg.dedup_tol},
              {"context_radius", cfg.context_radius},
              {"policy", to_string(cfg.policy)}};

  const std::size_t total = opt.n_trials + opt.group_cases;
  r.trials.resize(total);
  parallel_for(total, threads, [&](std::size_t i) {
    CounterRng rng(trial_seed(seed, i));
    TrialRecord &t = r.trials[i];
    t.index = i;
    t.seed = trial_seed(seed, i);
    t.threshold = th.value;
    t.expected = true;
    const std::string id = "trial" + std::to_string(i);
    if (i < opt.n_trials) {
      // The same interval played on a single note and on a two-note chord.
      const Chord note = random_chord(rng, opt, 1);
      const Chord chord = random_chord(rng, opt, 2);
      const int n = random_interval(rng, opt.max_semitones);
      const PhiFunction pn = learn(note, transpose(note, semitones(n)));
      const PhiFunction pc = learn(chord, transpose(chord, semitones(n)));
      t.group = "note_vs_chord";
      t.displacements = {{static_cast<double>(n), 0.0}};
      t.phi_ids = {id + "/note", id + "/chord"};
      t.statistic = phi_distance(pn, pc, cfg.dedup_tol);
      t.variable = n;
      t.extra = {{"note_pairs", pn.size()}, {"chord_pairs", pc.size()}};
    } else {
      // Two successive intervals against the combined one.
      const Chord c = random_chord(rng, opt, 1 + rng.below(2));
      const int n1 = random_interval(rng, opt.max_semitones / 2);
      const int n2 = random_interval(rng, opt.max_semitones / 2);
      const Chord c1 = transpose(c, semitones(n1));
      const PhiFunction first = learn(c, c1);
      const PhiFunction second = learn(c1, transpose(c1, semitones(n2)));
      const PhiFunction direct = learn(c, transpose(c, semitones(n1 + n2)));
      const PhiFunction composed = compose_phi(second, first, cfg);
      t.group = "group_law";
      t.displacements = {{static_cast<double>(n1), 0.0}, {static_cast<double>(n2), 0.0}};
      t.phi_ids = {id + "/first", id + "/second", id + "/direct"};
      t.statistic = composed.empty() ? std::nullopt : phi_distance(composed, direct, cfg.dedup_tol);
      t.variable = n1 + n2;
      t.extra = {{"composed_pairs", composed.size()}, {"direct_pairs", direct.size()}};
    }
    finalize(t);
  });

  for (const char *group : {"note_vs_chord", "group_law"}) {
    const std::string g = group;
    r.curves.push_back(rate_by_value(g, "interval (semitones)", "P(rho <= threshold)", r.trials,
                                     [g](const TrialRecord &t) { return t.group == g; },
                                     [](const TrialRecord &t) { return t.variable; },
                                     [](const TrialRecord &t) { return t.decision; }));
    std::size_t n = 0, k = 0, undefined = 0;
    for (const auto &t : r.trials) {
      if (t.group != g) continue;
      ++n;
      k += t.decision;
      undefined += !t.statistic;
    }
    r.summary[g] = {{"trials", n},
                    {"undefined", undefined},
                    {"rate", n ? static_cast<double>(k) / static_cast<double>(n) : 0.0}};
  }
  r.summary["threshold"] = detail::threshold_json(th);

  auto &fig = out.figure;
  fig.title = "hair-cell agent";
  CounterRng rng(stream_seed(seed, detail::kValidationStream));
  const Chord note = random_chord(rng, opt, 1);
  const Chord chord = random_chord(rng, opt, 2);
  const double k = semitones(5);
  svg::Panel resp;
  resp.title = "response vs proprioception, up a fourth";
  resp.x_label = "p";
  resp.y_label = "s";
  resp.line(response_curve(audio_scan(note, opt.cell, opt.n_nodes)), "note")
      .line(response_curve(audio_scan(transpose(note, k), opt.cell, opt.n_nodes)), "note, transposed")
      .line(response_curve(audio_scan(chord, opt.cell, opt.n_nodes)), "chord")
      .line(response_curve(audio_scan(transpose(chord, k), opt.cell, opt.n_nodes)), "chord, transposed");
  fig.panels.push_back(std::move(resp));
  svg::Panel phis;
  phis.title = "phi for the same interval";
  phis.x_label = "p";
  phis.y_label = "p'";
  phis.equal_aspect = true;
  auto pts = [](const PhiFunction &phi) {
    std::vector<Vec2> v;
    for (const auto &pr : phi.pairs) v.push_back({pr.p[0], pr.p_image[0]});
    return v;
  };
  phis.scatter(pts(learn(note, transpose(note, k))), "note")
      .scatter(pts(learn(chord, transpose(chord, k))), "chord", "#d62728");
  fig.panels.push_back(std::move(phis));
  return out;
}

}  // namespace smspace
