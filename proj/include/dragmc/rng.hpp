#pragma once

#include <cstdint>
#include <random>

namespace dragmc {

/// Seedable 64-bit stream used by every kernel.
///
/// Each call to uniform_open() or normal() is one "draw". Kernels document
/// the order in which they consume draws so that a run is reproducible for
/// a given seed (on a given standard library implementation).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  /// Uniform on the open interval (0, 1); never returns 0, so log(u) is finite.
  double uniform_open() {
    // 53 random bits, shifted by half an ulp off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dragmc
