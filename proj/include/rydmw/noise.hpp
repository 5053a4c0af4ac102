#pragma once

// Synthetic noise channels. Draws are keyed to (seed, point index), so a
// spectrum is identical whatever order its points are evaluated in.

#include <cstdint>
#include <cstddef>

namespace rydmw {

struct NoiseModel {
  double additive_rms = 0.0;       // Gaussian noise on P_t / P_0
  double two_photon_jitter = 0.0;  // rad/s RMS, applied to the evaluation point
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const NoiseModel&) const = default;
};

struct PointNoise {
  double jitter = 0.0;    // rad/s
  double additive = 0.0;  // transmission units
};

PointNoise draw_point_noise(const NoiseModel& noise, std::size_t index);

/// Independent 64-bit seed for item `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace rydmw
