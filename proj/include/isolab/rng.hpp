#pragma once

#include <cstdint>

namespace isolab {

// SplitMix64 stream. Replica streams are derived as
//   child_seed(seed, i) = mix(mix(seed) ^ mix(i + 0x9E3779B97F4A7C15))
// so parallel replicas are reproducible independently of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    return mix_steps(z);
  }

  // Uniform in [0, n), n >= 1, by rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % n;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t replica) {
    return mix_steps(mix_steps(seed) ^ mix_steps(replica + 0x9E3779B97F4A7C15ull));
  }

  Rng child(std::uint64_t replica) const { return Rng(child_seed(seed_, replica)); }

 private:
  static std::uint64_t mix_steps(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace isolab
