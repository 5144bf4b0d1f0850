#pragma once

#include <cstdint>

namespace scenecheck {

/// Deterministic splittable RNG (splitmix64). Used everywhere randomness is
/// needed so that runs are reproducible across platforms; standard-library
/// distributions are avoided on purpose (their output is implementation
/// defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t bounded(std::uint64_t n) {
    // Rejection sampling on the top bits keeps the draw unbiased.
    const std::uint64_t threshold = -n % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool coin() { return (next_u64() & 1u) != 0; }

  /// Derives an independent stream for (purpose, index) pairs, e.g. one
  /// stream per plan step. Same inputs always yield the same stream.
  Rng split(std::uint64_t tag, std::uint64_t index = 0) const {
    Rng mixer(state_ ^ (0xa0761d6478bd642fULL * (tag + 1)));
    mixer.next_u64();
    Rng out(mixer.next_u64() ^ (0xe7037ed1a0b428dbULL * (index + 1)));
    out.next_u64();
    return out;
  }

private:
  std::uint64_t state_;
};

}  // namespace scenecheck
