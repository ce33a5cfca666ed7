#include "smspace/rng.hpp"

namespace smspace {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng::CounterRng(std::uint64_t seed) : seed_(seed), key_(mix64(seed ^ 0x5ca1ab1e0ddba11ULL)) {}

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t c = counter_++;
  return mix64(key_ + (c + 1) * kGolden);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t CounterRng::below(std::size_t n) {
  __extension__ using u128 = unsigned __int128;
  const u128 wide = static_cast<u128>(next_u64()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(seed_, mix64(key_ ^ mix64(stream + kGolden)));
}

}  // namespace smspace
