#pragma once

#include <cstdint>
#include <random>

namespace ioc {

/// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of an independent stream identified by (master, a, b). Streams depend
/// only on their identifiers, never on the order in which they are created.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b = 0) {
  return std::mt19937_64(derive_seed(master, a, b));
}

}  // namespace ioc
