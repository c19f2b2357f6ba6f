#pragma once

// Seedable Gaussian white noise.
//
// Each (seed, stream, node) triple owns an independent std::mt19937_64 seeded
// through std::seed_seq, both of which are fully specified by the standard.
// Normal deviates come from the Box-Muller transform applied to 53-bit
// uniforms, so sequences are identical across platforms and releases.

#include <cstdint>
#include <random>

namespace netid {

enum class NoiseStream : std::uint32_t { excitation = 1, disturbance = 2 };

class GaussianSource {
 public:
  GaussianSource(std::uint64_t seed, NoiseStream stream, std::uint32_t node);

  /// Standard normal deviate.
  double next();

 private:
  double uniform_open();  // (0, 1]

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace netid
