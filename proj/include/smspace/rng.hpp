#pragma once

#include <cstddef>
#include <cstdint>

namespace smspace {

/// Counter-based generator: the i-th draw is a pure function of (key, i).
/// Streams are split by hashing a stream id into the key, so results do not
/// depend on which thread consumes which stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be > 0.
  std::size_t below(std::size_t n);

  /// Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  CounterRng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

/// Sub-seed of trial `index` in a run seeded with `run_seed`.
constexpr std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t index) { return run_seed + index; }

}  // namespace smspace
