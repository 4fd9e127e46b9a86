#pragma once

#include <cstdint>

namespace bandcov {

// splitmix64 (Steele/Lea/Vigna).  Counter-style state makes replicate
// streams cheap to derive and independent of thread scheduling, which keeps
// simulation output bit-identical across thread counts.
struct SplitMix64 {
  std::uint64_t s;

  explicit SplitMix64(std::uint64_t seed) : s(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform on (0, 1]; never returns 0, safe to feed into log()
  double uniform01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
};

// Decorrelated seed for a numbered substream (one per replicate / probe).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed);
  std::uint64_t base = g.next();
  SplitMix64 h(base ^ (stream * 0xd1342543de82ef95ull + 0x9e3779b97f4a7c15ull));
  return h.next();
}

}  // namespace bandcov
