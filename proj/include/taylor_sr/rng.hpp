#pragma once

#include <cstdint>
#include <random>

namespace tsr {

// splitmix64 step; used to derive independent child seeds from a master
// seed so parallel and serial schedules see identical streams.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(split_seed(seed, index));
}

}  // namespace tsr
