#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace ompli {

/// Counter-seeded splitmix64 engine. Seeding is one multiply-xor chain, so a
/// fresh, statistically independent stream per (seed, step, rollout) triple is
/// cheap enough to create inside the hot sampling loops. Satisfies
/// UniformRandomBitGenerator.
class Splitmix64 {
 public:
  using result_type = std::uint64_t;

  explicit Splitmix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Avalanche mix used to fold counters into a seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic substream for one rollout: independent of evaluation order
/// and of how rollouts are distributed over threads.
inline Splitmix64 substream(std::uint64_t seed, std::uint64_t step,
                            std::uint64_t rollout) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (step + 0xbf58476d1ce4e5b9ULL));
  h = mix64(h ^ (rollout + 0x94d049bb133111ebULL));
  return Splitmix64(h);
}

/// Uniform double in [0, 1), 53-bit resolution.
inline double uniform01(Splitmix64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Splitmix64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// One pair of independent standard normals (Marsaglia polar method).
inline std::pair<double, double> normal_pair(Splitmix64& rng) {
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      return {u * f, v * f};
    }
  }
}

}  // namespace ompli
