#pragma once

#include <cstdint>
#include <random>

namespace uwarma {

/// Deterministic uniform source. The mapping from raw 64-bit output to a
/// double is fixed here (53-bit mantissa, half-ulp offset) so that streams
/// are bit-identical across platforms and never touch 0 or 1.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uwarma
