#pragma once

#include <cstdint>

#include "bverify/vec3.hpp"

namespace bverify {

// splitmix64: tiny, well-mixed, and identical on every platform.  All seeded
// choices in the project (corruption directions, test-function suites, sample
// points) go through this so runs are reproducible bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) using the top 53 bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // rejection sampling from the cube; at most a handful of draws on average
  Vec3 in_unit_ball() {
    for (;;) {
      Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (norm2(v) <= 1.0) return v;
    }
  }

  Vec3 unit_vector() {
    for (;;) {
      Vec3 v = in_unit_ball();
      double n2 = norm2(v);
      if (n2 > 1e-12) return v / std::sqrt(n2);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace bverify
