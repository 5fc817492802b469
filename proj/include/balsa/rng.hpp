#pragma once

#include <cstdint>

namespace balsa {

// splitmix64. Self-contained so seeded instance streams are reproducible
// byte for byte regardless of the standard library in use.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Rejection sampling, no modulo bias.
  uint64_t below(uint64_t n) {
    uint64_t lim = ~0ull - ~0ull % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= lim);
    return v % n;
  }

  // Uniform in [lo, hi], inclusive.
  int range(int lo, int hi) { return lo + (int)below((uint64_t)(hi - lo + 1)); }
};

}  // namespace balsa
