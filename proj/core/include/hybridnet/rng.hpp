#pragma once

#include <cstdint>
#include <random>

namespace hybridnet {

using Rng = std::mt19937_64;

// Independent named streams inside one episode, so that e.g. adding an agent
// does not shift the channel draws.
enum class Stream : std::uint64_t {
  kPlacement = 1,
  kTargets = 2,
  kChannel = 3,
  kAgentInit = 4,
  kExploration = 5,
  kReplay = 6,
};

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t sub = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(sub)};
  return Rng(seq);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n) by rejection; n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace hybridnet
