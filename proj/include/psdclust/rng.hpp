#pragma once

#include <cstdint>
#include <random>

namespace psdclust {

// Stable seed derivation. Derived seeds depend only on the inputs, never on
// execution order, so parallel generation stays reproducible.
std::uint64_t splitmix64(std::uint64_t state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Deterministic random source. The engine is mt19937_64 (sequence fixed by the
// standard); the distributions are implemented here rather than taken from
// <random> so that streams do not depend on the standard-library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one spare value is cached.
  double gauss();

  bool bernoulli(double prob) { return uniform01() < prob; }

  // Uniform integer in [0, bound), bound >= 1.
  std::uint32_t uniform_below(std::uint32_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace psdclust
