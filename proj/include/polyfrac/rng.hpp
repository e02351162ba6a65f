#pragma once

#include <cstdint>

#include "polyfrac/vec3.hpp"

namespace polyfrac {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so parallel schedules and re-runs produce identical numbers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return at(counter_++); }

  /// Random access: value of draw i, independent of generator state.
  std::uint64_t at(std::uint64_t i) const {
    return mix(mix(seed_ ^ (stream_ * 0xda942042e4dd58b5ULL)) + i);
  }

  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  /// Random-access variant of uniform(): draw i as a double in [0,1).
  double uniform_at(std::uint64_t i) const { return (at(i) >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  Vec3 in_box(const Aabb& b) {
    return {uniform(b.lo.x, b.hi.x), uniform(b.lo.y, b.hi.y), uniform(b.lo.z, b.hi.z)};
  }

  CounterRng substream(std::uint64_t label) const {
    return CounterRng(mix(seed_ ^ mix(label)), stream_ + 1);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace polyfrac
