#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "busembed/core.hpp"

namespace busembed {

// Fixed-algorithm PRNG so experiment CSVs reproduce across platforms and
// standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n) by rejection
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    while (true) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  uint64_t state_;
};

inline constexpr const char* kPrngName = "splitmix64";

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  SplitMix64 s(seed ^ (a * 0x9e3779b97f4a7c15ull) ^
               (b * 0xd1b54a32d192ed03ull));
  return s.next();
}

// Uniform integer coordinates on the area, distinct in both axes; colors
// "c0".."c{k-1}" get l points each. Deterministic under the seed.
inline ColoredPointSet generate_random(int k, int l, uint64_t seed,
                                       int width = 1024, int height = 768) {
  if (k < 1 || l < 1) throw std::invalid_argument("need k >= 1 and l >= 1");
  long long n = (long long)k * l;
  if (n > width || n > height)
    throw Error("area too small for " + std::to_string(n) +
                " points with distinct coordinates");
  SplitMix64 rng(seed);
  std::set<long long> used_x, used_y;
  InstanceBuilder b;
  for (int c = 0; c < k; ++c) {
    for (int j = 0; j < l; ++j) {
      long long x, y;
      do x = (long long)rng.below((uint64_t)width);
      while (!used_x.insert(x).second);
      do y = 1 + (long long)rng.below((uint64_t)height);
      while (!used_y.insert(y).second);
      b.add(Rat(x), Rat(y), "c" + std::to_string(c));
    }
  }
  return b.build();
}

}  // namespace busembed
