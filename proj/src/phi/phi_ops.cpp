#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "proprio_index.hpp"
#include "smspace/errors.hpp"
#include "smspace/phi.hpp"

namespace smspace {

namespace {

std::size_t widest_component(const std::vector<PhiPair> &pairs, bool image) {
  if (pairs.empty()) return 0;
  const std::size_t dim = (image ? pairs.front().p_image : pairs.front().p).size();
  std::size_t best_c = 0;
  double best = -1.0;
  for (std::size_t c = 0; c < dim; ++c) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto &pr : pairs) {
      const double v = (image ? pr.p_image : pr.p)[c];
      lo = std::fmin(lo, v);
      hi = std::fmax(hi, v);
    }
    if (hi - lo > best) {
      best = hi - lo;
      best_c = c;
    }
  }
  return best_c;
}

std::uint64_t cell_key(std::int64_t a, std::int64_t b) {
  return (static_cast<std::uint64_t>(a) * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(b);
}

}  // namespace

PhiFunction deduplicate(std::vector<PhiPair> pairs, double tol) {
  PhiFunction out;
  if (pairs.empty()) return out;
  const std::size_t ca = widest_component(pairs, false);
  const std::size_t cb = widest_component(pairs, true);
  // Grid hash on one domain and one image component; cells of side tol, so a
  // duplicate of a kept pair is always in one of the 3x3 neighbouring cells.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  auto cell = [tol](double v) { return static_cast<std::int64_t>(std::floor(v / tol)); };

  for (auto &pr : pairs) {
    const std::int64_t a = cell(pr.p[ca]);
    const std::int64_t b = cell(pr.p_image[cb]);
    bool duplicate = false;
    for (std::int64_t da = -1; da <= 1 && !duplicate; ++da) {
      for (std::int64_t db = -1; db <= 1 && !duplicate; ++db) {
        auto it = cells.find(cell_key(a + da, b + db));
        if (it == cells.end()) continue;
        for (std::size_t kept : it->second) {
          const auto &q = out.pairs[kept];
          if (within(pr.p, q.p, tol) && within(pr.p_image, q.p_image, tol)) {
            duplicate = true;
            break;
          }
        }
      }
    }
    if (duplicate) continue;
    cells[cell_key(a, b)].push_back(out.pairs.size());
    out.pairs.push_back(std::move(pr));
  }
  return out;
}

PhiFunction learn_phi(const SmcTable &before, const SmcTable &after, const MatchConfig &cfg) {
  const std::vector<IndexPair> matches = match_coincidences(before, after, cfg);
  std::vector<PhiPair> pairs;
  pairs.reserve(matches.size());
  for (const auto &[k, kk] : matches) pairs.push_back({before[k].p, after[kk].p, k, kk});
  return deduplicate(std::move(pairs), cfg.dedup_tol);
}

std::optional<double> phi_distance(const PhiFunction &a, const PhiFunction &b, double domain_tol) {
  if (!(domain_tol > 0.0)) throw ConfigError("domain tolerance must be > 0");
  const detail::ProprioIndex index = detail::domain_index(b);
  double total = 0.0;
  std::size_t terms = 0;
  for (const auto &pa : a.pairs) {
    for (std::size_t i : index.near(pa.p, domain_tol)) {
      total += euclidean_distance(pa.p_image, b.pairs[i].p_image);
      ++terms;
    }
  }
  if (terms == 0) return std::nullopt;
  return total;
}

PhiFunction compose_phi(const PhiFunction &second, const PhiFunction &first, const MatchConfig &cfg) {
  cfg.validate();
  const detail::ProprioIndex index = detail::domain_index(second);
  std::vector<PhiPair> chained;
  for (const auto &f : first.pairs) {
    for (std::size_t i : index.near(f.p_image, cfg.dedup_tol)) {
      const auto &s = second.pairs[i];
      chained.push_back({f.p, s.p_image, f.domain_index, s.image_index});
    }
  }
  return deduplicate(std::move(chained), cfg.dedup_tol);
}

}  // namespace smspace
