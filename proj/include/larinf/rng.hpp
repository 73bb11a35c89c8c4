#pragma once

#include <cstdint>
#include <random>

namespace larinf {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent stream for (seed, index); the same pair always yields the same
// sequence, regardless of which thread consumes it.
inline Engine stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (index * 0xD1B54A32D192ED03ULL);
  std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
  return Engine(seq);
}

// Two-level derivation, e.g. replication r and bootstrap draw b inside it.
inline Engine stream(std::uint64_t seed, std::uint64_t index, std::uint64_t sub) {
  std::uint64_t s = seed ^ (index * 0xD1B54A32D192ED03ULL);
  const std::uint64_t child = splitmix64(s);
  return stream(child, sub);
}

}  // namespace larinf
