#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <random>

namespace pbls {

/// Unbiased uniform draw from [0, bound). Hand-rolled rejection sampling so
/// results are identical across standard library implementations (uniform_int_distribution is
/// not portable between them).
inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t bound) {
  assert(bound > 0);
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t rem = (max % bound + 1) % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t r = rng();
    if (rem == 0 || r < max - rem + 1) return r % bound;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace pbls
