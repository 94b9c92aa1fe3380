#include "volclust/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace volclust {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // Largest multiple of n that fits; values at or above it are rejected.
  const std::uint64_t limit = kMax - kMax % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace volclust
