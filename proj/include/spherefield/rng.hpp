#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spherefield {

/// SplitMix64 finalizer applied to (seed, stream). This is the only sanctioned
/// way to hand independent generators to parallel workers or sub-tasks:
/// derive_seed(seed, i) for worker/chunk i, never a shared engine.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Thin wrapper over mt19937_64 with the handful of variates the samplers need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() { return normal_(engine_); }
  double exponential() { return -std::log(uniform()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spherefield
