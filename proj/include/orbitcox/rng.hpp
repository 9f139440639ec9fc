#pragma once

#include <cstdint>
#include <random>

namespace orbitcox {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` derived from `base`: mix64(base ^ mix64(index)).
/// Streams are independent of the order in which they are consumed.
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Poisson draw that also accepts a zero mean.
inline std::uint64_t poisson(Rng& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

}  // namespace orbitcox
