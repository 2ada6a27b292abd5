#pragma once

#include <cstdint>

namespace absparse {

/// Deterministic splittable generator.
///
/// The state is a single 64-bit counter advanced by the SplitMix64 increment;
/// outputs are the SplitMix64 finalizer of the state. `split(k)` derives an
/// independent child stream by hashing (state, k), so per-trial streams are a
/// pure function of the root seed and the trial number. Bounded draws use
/// rejection on the top of the range, so results do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform sign in {-1, +1}.
  int sign() { return (next() >> 63) ? -1 : 1; }

  Rng split(std::uint64_t stream) const {
    Rng child(0);
    child.state_ = mix(state_ ^ mix(stream + 0xbf58476d1ce4e5b9ULL));
    return child;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace absparse
