#pragma once

#include <cstdint>
#include <random>

namespace hbat {

using Engine = std::mt19937_64;

/// Stream labels keep the stealing events independent of the visit
/// sequence: for a fixed seed the steals do not depend on the strategy.
enum class Stream : std::uint64_t {
  kSteal = 0x5354'4541'4c00'0001ULL,
  kVisit = 0x5649'5349'5400'0002ULL,
  kGap = 0x4741'5000'0000'0003ULL,
  kGapAmount = 0x414d'4f55'4e54'0004ULL,
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for (seed, replication, stream). Pure function of its inputs.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replication,
                                    Stream stream) {
  return mix64(mix64(mix64(seed) ^ replication) ^
               static_cast<std::uint64_t>(stream));
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t replication,
                          Stream stream) {
  return Engine(derive_seed(seed, replication, stream));
}

/// Uniform double in [0, 1) from the top 53 bits; platform independent,
/// unlike std::uniform_real_distribution.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace hbat
