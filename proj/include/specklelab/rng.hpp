#pragma once

#include <cstdint>
#include <random>

namespace specklelab {

// Deterministic random source. mt19937_64 gives a portable bit stream; the
// normal and gamma transforms are implemented here (not via std::*_distribution,
// whose algorithms are implementation-defined) so identical seeds produce
// identical doubles on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal, Marsaglia polar method. One spare is cached.
  double normal();

  // Gamma(shape, 1) for shape >= 1, Marsaglia-Tsang squeeze method.
  double gamma(double shape);

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace specklelab
