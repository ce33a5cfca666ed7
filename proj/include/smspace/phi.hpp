#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smspace/smc.hpp"

namespace smspace {

/// Which coincidences enter a learned phi.
enum class CoincidencePolicy {
  /// Every (k, k') whose exteroception agrees within tolerance.
  kAll,
  /// Only coincidences where the contingency is locally invertible: each
  /// sample is distinct from every other sample of its own scan, and the
  /// match is one-to-one between the two scans.
  kUnambiguous,
};

const char *to_string(CoincidencePolicy policy);
/// Accepts "all" and "unambiguous"; throws ConfigError otherwise.
CoincidencePolicy coincidence_policy_from_string(const std::string &name);

struct MatchConfig {
  /// Exteroceptor outputs match when every component differs by less than this.
  double photo_tol = 0.005;
  /// Pairs whose p and p' both lie within this of a kept pair are dropped.
  /// Also the tolerance for comparing proprioception across phi functions.
  double dedup_tol = 0.01;
  CoincidencePolicy policy = CoincidencePolicy::kAll;
  /// One-dimensional scans only: also compare this many neighbouring samples
  /// on each side, so a coincidence is a match of a short stretch of the scan.
  std::size_t context_radius = 0;

  /// Throws ConfigError on non-positive tolerances.
  void validate() const;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Accepted (before, after) sample index pairs, before the dedup step, in
/// row-major order of the before index then the after index. Uses a sorted
/// index over one exteroceptor component.
std::vector<IndexPair> match_coincidences(const SmcTable &before, const SmcTable &after, const MatchConfig &cfg);

/// Reference all-pairs scan; same output as match_coincidences.
std::vector<IndexPair> match_coincidences_naive(const SmcTable &before, const SmcTable &after,
                                                const MatchConfig &cfg);

/// Catalogue the coincidences s_k = s'_k' as pairs <p_k, p'_k'>. Throws
/// ConfigError when the tables come from different bodies.
PhiFunction learn_phi(const SmcTable &before, const SmcTable &after, const MatchConfig &cfg);

/// Keep the first pair of every group whose p and p' agree within `tol`.
PhiFunction deduplicate(std::vector<PhiPair> pairs, double tol);

/// Sum of ||p'_a - p'_b|| over all pair combinations whose domain points
/// agree within `domain_tol`. Not normalized by the number of terms.
/// nullopt when no domain points agree.
std::optional<double> phi_distance(const PhiFunction &a, const PhiFunction &b, double domain_tol = 0.01);

/// second o first: pairs <p_k, p~'> such that the image p' of `first` agrees
/// with a domain point p~ of `second` within cfg.dedup_tol.
PhiFunction compose_phi(const PhiFunction &second, const PhiFunction &first, const MatchConfig &cfg);

/// Header p_1..p_P,pprime_1..pprime_P then one row per pair.
void write_phi_csv(std::ostream &os, const PhiFunction &phi);

}  // namespace smspace
