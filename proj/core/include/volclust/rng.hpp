#pragma once

// Deterministic random streams.
//
// Every randomized computation draws from an Rng built for a substream key
// (seed, domain, index). The key is mixed with SplitMix64 and seeds a
// std::mt19937_64, whose output sequence is fixed by the C++ standard. The
// conversions below (uniform01, uniform_index, normal) are spelled out here
// rather than delegated to <random> distributions, whose output differs
// between standard library implementations.
//
//   key         = splitmix64(splitmix64(seed ^ domain) + index)
//   uniform01() = (next_u64() >> 11) * 2^-53            in [0, 1)
//   uniform_index(n): rejection of next_u64() above the largest multiple
//                     of n, then modulo n
//   normal():   Box-Muller, cos branch, u1 replaced by 1 - uniform01()

#include <cstdint>
#include <random>

namespace volclust {

/// Domain tags keep substreams of different consumers disjoint.
enum class StreamDomain : std::uint64_t {
  VcsTrial = 0x7663735f747269ULL,         // "vcs_tri"
  TrainReference = 0x7663615f726566ULL,   // "vca_ref"
  Pattern = 0x7061747465726eULL,          // "pattern"
  Drift = 0x6472696674ULL,                // "drift"
  GradCheck = 0x67726164636bULL,          // "gradck"
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t substream_key(std::uint64_t seed, StreamDomain domain,
                                      std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(domain)) +
                    index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(key) {}
  Rng(std::uint64_t seed, StreamDomain domain, std::uint64_t index)
      : engine_(substream_key(seed, domain, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal variate.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace volclust
