#include "rydmw/kernels.hpp"

#include "rydmw/susceptibility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>

namespace rydmw {

void NoiseModel::validate() const {
  if (!(additive_rms >= 0.0) || !(two_photon_jitter >= 0.0))
    throw std::invalid_argument("noise amplitudes must be >= 0");
}

namespace {

// SplitMix64: one 64-bit state word, so keying an engine per point is cheap
// (a Mersenne Twister spends microseconds filling its state).
struct SplitMix64 {
  using result_type = std::uint64_t;
  std::uint64_t state;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

}  // namespace

PointNoise draw_point_noise(const NoiseModel& noise, std::size_t index) {
  SplitMix64 eng{derive_seed(noise.seed, index)};
  std::normal_distribution<double> gauss;
  // Always two draws, so enabling one channel never changes the other.
  const double zj = gauss(eng);
  const double za = gauss(eng);
  return {noise.two_photon_jitter * zj, noise.additive_rms * za};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{std::uint32_t(master), std::uint32_t(master >> 32), std::uint32_t(index),
                    std::uint32_t(index >> 32), 0x5eedu};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (std::uint64_t(words[0]) << 32) | words[1];
}

namespace kernels {

namespace {

double transmission_at(const SystemParams& p, double delta) {
  return std::exp(-p.od * p.gamma2 * normalized_coherence(p, delta).imag());
}

double point_value(const SystemParams& p, double delta, std::size_t index, const NoiseModel* noise) {
  if (!noise) return transmission_at(p, delta);
  const PointNoise n = draw_point_noise(*noise, index);
  const double t = transmission_at(p, delta + n.jitter) + n.additive;
  return std::clamp(t, 0.0, 1.0 + 5.0 * noise->additive_rms);
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("output span size does not match grid");
}

}  // namespace

void transmission(const SystemParams& p, std::span<const double> grid, std::span<double> out,
                  const NoiseModel* noise) {
  check_sizes(grid.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  // Exceptions may not cross the parallel region; park the first one.
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = point_value(p, grid[i], std::size_t(i), noise);
    } catch (...) {
#pragma omp critical(rydmw_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void transmission_serial(const SystemParams& p, std::span<const double> grid, std::span<double> out,
                         const NoiseModel* noise) {
  check_sizes(grid.size(), out.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = point_value(p, grid[i], i, noise);
}

void steady_state_coherence(const SystemParams& p, std::span<const double> grid, std::span<cplx> out,
                            const GammaSplit& split) {
  if (grid.size() != out.size()) throw std::invalid_argument("output span size does not match grid");
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = steady_state(p, grid[i], split).probe_coherence();
    } catch (...) {
#pragma omp critical(rydmw_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void steady_state_coherence_serial(const SystemParams& p, std::span<const double> grid,
                                   std::span<cplx> out, const GammaSplit& split) {
  if (grid.size() != out.size()) throw std::invalid_argument("output span size does not match grid");
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = steady_state(p, grid[i], split).probe_coherence();
}

}  // namespace kernels
}  // namespace rydmw
