#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dadprune {

// Seeded generator whose outputs are identical across standard libraries:
// mt19937_64's raw sequence is fixed by the standard, and every derived draw
// below is computed here rather than by <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent seed for one named stream derived from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

}  // namespace dadprune
