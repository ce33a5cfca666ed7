#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "smspace/errors.hpp"
#include "smspace/phi.hpp"

namespace smspace {

const char *to_string(CoincidencePolicy policy) {
  switch (policy) {
    case CoincidencePolicy::kAll:
      return "all";
    case CoincidencePolicy::kUnambiguous:
      return "unambiguous";
  }
  return "unknown";
}

CoincidencePolicy coincidence_policy_from_string(const std::string &name) {
  if (name == "all") return CoincidencePolicy::kAll;
  if (name == "unambiguous") return CoincidencePolicy::kUnambiguous;
  throw ConfigError("unknown coincidence policy \"" + name + "\" (expected all|unambiguous)");
}

void MatchConfig::validate() const {
  if (!(photo_tol > 0.0) || !std::isfinite(photo_tol)) throw ConfigError("photo_tol must be > 0");
  if (!(dedup_tol > 0.0) || !std::isfinite(dedup_tol)) throw ConfigError("dedup_tol must be > 0");
}

namespace {

// Exteroception of every eligible sample, optionally with its scan neighbours
// appended. Row r describes sample node[r].
struct Features {
  std::size_t dim = 0;
  std::vector<double> data;
  std::vector<std::size_t> node;

  std::size_t rows() const { return node.size(); }
  const double *row(std::size_t r) const { return &data[r * dim]; }
};

Features build_features(const SmcTable &table, std::size_t radius) {
  if (radius > 0 && !table.layout().is_1d()) {
    throw ConfigError("context_radius is only defined for one-dimensional scans");
  }
  Features f;
  const std::size_t ns = table.photo_size();
  const std::size_t n = table.size();
  f.dim = ns * (2 * radius + 1);
  if (n < 2 * radius + 1) return f;
  for (std::size_t k = radius; k + radius < n; ++k) {
    f.node.push_back(k);
    for (std::size_t j = k - radius; j <= k + radius; ++j) {
      const auto &s = table[j].s.values;
      f.data.insert(f.data.end(), s.begin(), s.end());
    }
  }
  return f;
}

bool close(const double *a, const double *b, std::size_t dim, double tol) {
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    if (!(d < tol && -d < tol)) return false;
  }
  return true;
}

// Rows sorted on the component with the widest spread; a query scans only the
// key window and then applies the full componentwise test.
class SortedIndex {
 public:
  explicit SortedIndex(const Features &f) : f_(f), order_(f.rows()) {
    if (f.rows() == 0) return;
    double best = -1.0;
    for (std::size_t c = 0; c < f.dim; ++c) {
      double lo = f.row(0)[c], hi = lo;
      for (std::size_t r = 1; r < f.rows(); ++r) {
        lo = std::min(lo, f.row(r)[c]);
        hi = std::max(hi, f.row(r)[c]);
      }
      if (hi - lo > best) {
        best = hi - lo;
        key_ = c;
      }
    }
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return f.row(a)[key_] < f.row(b)[key_]; });
    keys_.reserve(order_.size());
    for (std::size_t r : order_) keys_.push_back(f.row(r)[key_]);
  }

  // Rows within tol of q, ascending.
  std::vector<std::size_t> near(const double *q, double tol) const {
    std::vector<std::size_t> out;
    if (keys_.empty()) return out;
    const double slack = 4.0 * DBL_EPSILON * (std::fabs(q[key_]) + tol);
    const double lo = q[key_] - tol - slack;
    const double hi = q[key_] + tol + slack;
    auto it = std::lower_bound(keys_.begin(), keys_.end(), lo);
    for (; it != keys_.end() && *it <= hi; ++it) {
      const std::size_t r = order_[static_cast<std::size_t>(it - keys_.begin())];
      if (close(q, f_.row(r), f_.dim, tol)) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const Features &f_;
  std::size_t key_ = 0;
  std::vector<std::size_t> order_;
  std::vector<double> keys_;
};

std::vector<std::size_t> naive_near(const Features &f, const double *q, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < f.rows(); ++r) {
    if (close(q, f.row(r), f.dim, tol)) out.push_back(r);
  }
  return out;
}

void check_compatible(const SmcTable &before, const SmcTable &after) {
  if (before.photo_size() != after.photo_size() || before.proprio_size() != after.proprio_size()) {
    throw ConfigError("scan tables come from different bodies (vector lengths differ)");
  }
}

template <class NearB, class NearA>
std::vector<IndexPair> match_with(const MatchConfig &cfg, NearB &&near_before, NearA &&near_after, const Features &fb,
                                  const Features &fa) {
  std::vector<std::vector<std::size_t>> hits(fb.rows());
  for (std::size_t r = 0; r < fb.rows(); ++r) hits[r] = near_after(fb.row(r));

  std::vector<IndexPair> out;
  if (cfg.policy == CoincidencePolicy::kAll) {
    for (std::size_t r = 0; r < fb.rows(); ++r) {
      for (std::size_t a : hits[r]) out.emplace_back(fb.node[r], fa.node[a]);
    }
    return out;
  }

  std::vector<std::size_t> col(fa.rows(), 0);
  for (const auto &h : hits) {
    for (std::size_t a : h) ++col[a];
  }
  auto distinct = [](const Features &f, auto &&near_fn, std::size_t r) { return near_fn(f.row(r)).size() == 1; };
  for (std::size_t r = 0; r < fb.rows(); ++r) {
    if (hits[r].size() != 1) continue;
    const std::size_t a = hits[r].front();
    if (col[a] != 1) continue;
    if (!distinct(fb, near_before, r) || !distinct(fa, near_after, a)) continue;
    out.emplace_back(fb.node[r], fa.node[a]);
  }
  return out;
}

}  // namespace

std::vector<IndexPair> match_coincidences(const SmcTable &before, const SmcTable &after, const MatchConfig &cfg) {
  cfg.validate();
  check_compatible(before, after);
  const Features fb = build_features(before, cfg.context_radius);
  const Features fa = build_features(after, cfg.context_radius);
  const SortedIndex ib(fb);
  const SortedIndex ia(fa);
  auto near_b = [&](const double *q) { return ib.near(q, cfg.photo_tol); };
  auto near_a = [&](const double *q) { return ia.near(q, cfg.photo_tol); };
  return match_with(cfg, near_b, near_a, fb, fa);
}

std::vector<IndexPair> match_coincidences_naive(const SmcTable &before, const SmcTable &after,
                                                const MatchConfig &cfg) {
  cfg.validate();
  check_compatible(before, after);
  const Features fb = build_features(before, cfg.context_radius);
  const Features fa = build_features(after, cfg.context_radius);
  auto near_b = [&](const double *q) { return naive_near(fb, q, cfg.photo_tol); };
  auto near_a = [&](const double *q) { return naive_near(fa, q, cfg.photo_tol); };
  return match_with(cfg, near_b, near_a, fb, fa);
}

}  // namespace smspace
