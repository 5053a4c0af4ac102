#pragma once

// Probe transmission spectra: synthesis, resonance factorization and file I/O.

#include "rydmw/noise.hpp"
#include "rydmw/params.hpp"
#include "rydmw/susceptibility.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace rydmw {

struct GridSpec {
  double start = -mhz(20.0);
  double stop = mhz(20.0);
  std::size_t points = 801;

  /// Uniform grid, endpoints included. Requires points >= 2 and start < stop.
  std::vector<double> values() const;
};

struct SpectrumMeta {
  std::optional<SystemParams> params;
  std::optional<NoiseModel> noise;
};

struct Spectrum {
  std::vector<double> grid;          // two-photon detuning, rad/s, strictly ascending
  std::vector<double> transmission;  // P_t / P_0
  SpectrumMeta meta;

  std::size_t size() const { return grid.size(); }
  /// Structural checks; the transmission ceiling is only enforced for
  /// synthesized spectra (meta.params set).
  void validate() const;
};

/// exp(-OD (Gamma/Omega_p) Im rho21(delta)), direct closed form.
double transmit(const SystemParams& p, double delta);

/// R_i(delta) = exp{-(OD Gamma/2) Im[S_i/(delta - delta_i)]}; product equals transmit().
std::array<double, 3> resonance_factors(const SystemParams& p, const PoleDecomposition& dec, double delta);
std::array<double, 3> resonance_factors(const SystemParams& p, double delta);

Spectrum synthesize(const SystemParams& p, const GridSpec& grid = {},
                    const std::optional<NoiseModel>& noise = std::nullopt);
Spectrum synthesize(const SystemParams& p, std::span<const double> grid,
                    const std::optional<NoiseModel>& noise = std::nullopt);

/// 100 x (T_with - T_without) at the deepest point of the reference spectrum.
/// Positive when the MW field fills in the EIA dip.
double transmission_difference(const Spectrum& with_mw, const Spectrum& without_mw);

// CSV: header "delta_hz,transmission", LF endings, 17 significant digits.
void write_csv(const Spectrum& s, std::ostream& out);
/// Throws ParseError with the 1-based line number.
Spectrum read_csv(std::istream& in);

nlohmann::json meta_to_json(const SpectrumMeta& meta);
SpectrumMeta meta_from_json(const nlohmann::json& j);

/// Sidecar metadata path: same stem, .json extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);
void save_spectrum(const Spectrum& s, const std::filesystem::path& csv);
/// Reads the CSV and, when present, its sidecar.
Spectrum load_spectrum(const std::filesystem::path& csv);

}  // namespace rydmw
