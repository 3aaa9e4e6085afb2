#pragma once

#include <cstdint>
#include <random>

#include "fds/linalg.hpp"

namespace fds {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Named RNG streams. Stream i of purpose p under base seed s uses
// seed s ^ splitmix64(p * 2^32 + i), so parallel callers never share draws.
enum class Stream : std::uint32_t {
  kPrior = 1,
  kRefine = 2,
  kReference = 3,
  kTargetPoints = 4,
  kTraining = 5,
  kInit = 6,
  kProbe = 7,
  kQuery = 8,
  kProjection = 9,
};

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) {
  const auto key = (static_cast<std::uint64_t>(purpose) << 32) ^ index;
  return seed ^ splitmix64(key);
}

inline Rng make_rng(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) {
  return Rng(stream_seed(seed, purpose, index));
}

inline Vec standard_normal(Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(d);
  for (Index i = 0; i < d; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace fds
