#pragma once

#include <cstdint>

namespace mlp {

/// splitmix64; deterministic across platforms, unlike the standard library
/// distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t mask = ~0ull;
    uint64_t limit = mask - mask % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  long long range(long long lo, long long hi) {  // inclusive
    return lo + (long long)below((uint64_t)(hi - lo + 1));
  }

  bool chance(double p) { return (double)next() / (double)UINT64_MAX < p; }

  /// Geometric with the given mean, truncated to [0, cap].
  int geometric(double mean, int cap) {
    double p = 1.0 / (mean + 1.0);
    int k = 0;
    while (k < cap && !chance(p)) k++;
    return k;
  }

  static uint64_t mix(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (0x632be59bd9b4e019ull * (stream + 1)));
    return r.next();
  }

 private:
  uint64_t state_;
};

}  // namespace mlp
