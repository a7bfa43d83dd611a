#pragma once

#include <cstdint>
#include <random>

namespace polarcc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Per-trial random stream: trial t of run seed s uses a mt19937_64 seeded
/// with splitmix64(s + golden * (t + 1)), so trials are independent of each
/// other and of the execution schedule.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed + 0x9E3779B97F4A7C15ull * (trial + 1)));
}

/// Uniform draw in [0, 1) from the top 53 bits of the generator output.
/// (The standard library distributions are not bit-portable across
/// implementations; this mapping is.)
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace polarcc
