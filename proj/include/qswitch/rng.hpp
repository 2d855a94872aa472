// rng.hpp: counter-based SplitMix64 streams.
//
// Output i of stream (seed, stream) is mix(key + (i + 1) * golden), with the
// key derived from both. Any output can be recomputed from (seed, stream, i)
// alone, which keeps block-parallel sampling independent of thread count.

#pragma once

#include <cstdint>

namespace qswitch {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64_mix(seed) ^ splitmix64_mix(stream * kGoldenGamma + 0x632be59bd9b4e019ULL)) {}

  constexpr std::uint64_t next() { return splitmix64_mix(key_ + (++counter_) * kGoldenGamma); }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qswitch
