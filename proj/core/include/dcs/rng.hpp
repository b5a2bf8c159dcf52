#pragma once

#include <cstdint>
#include <limits>

namespace dcs {

// splitmix64 finalizer; used both as a hash for stream derivation and as the
// state transition of RandomStream.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small counter-based generator satisfying UniformRandomBitGenerator. Each
/// (seed, agent, k, t) tuple gets its own stream, so draws do not depend on
/// the order in which agents are processed.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static RandomStream derive(std::uint64_t seed, std::uint64_t agent, std::uint64_t k, std::uint64_t t) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (agent + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (k + 0x85157af5ULL));
    h = mix64(h ^ (t + 0x2545f4914f6cdd1dULL));
    return RandomStream(h);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace dcs
