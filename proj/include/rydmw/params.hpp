#pragma once

// Physical parameters of the MW-dressed four-level ladder and unit conversions.
//
// Every frequency-like quantity is stored as an angular frequency in rad/s.
// Hz only appears at the I/O boundary (JSON, CSV, CLI flags).

#include <json.hpp>

#include <numbers>

namespace rydmw {

// CODATA 2018 recommended values (SI).
namespace codata {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double bohr_radius = 5.29177210903e-11;      // m
}  // namespace codata

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double hz_to_angular(double f_hz) { return two_pi * f_hz; }
constexpr double angular_to_hz(double omega) { return omega / two_pi; }
constexpr double mhz(double f_mhz) { return hz_to_angular(f_mhz * 1e6); }
constexpr double khz(double f_khz) { return hz_to_angular(f_khz * 1e3); }
constexpr double to_mhz(double omega) { return angular_to_hz(omega) * 1e-6; }

/// Natural linewidth of the probe transition used throughout (Gamma / 2pi = 6 MHz).
inline constexpr double kNaturalLinewidth = mhz(6.0);

/// Default total Rydberg dephasing for synthetic spectra (gamma3 = gamma4 = 2pi x 50 kHz).
inline constexpr double kDefaultRydbergDephasing = khz(50.0);

/// One physical configuration of the four-level system.
///
/// gamma3 = gamma/2 + gamma_d and gamma4 = gamma'/2 + gamma_d' are total
/// coherence decay rates; the split into population decay and pure dephasing
/// only matters to the Lindblad solver (see lindblad.hpp).
struct SystemParams {
  double omega_p = mhz(0.4);
  double omega_c = mhz(6.0);
  double omega_mw = 0.0;
  double delta_c = 0.0;
  double delta_mw = 0.0;
  double gamma2 = kNaturalLinewidth / 2.0;
  double gamma3 = kDefaultRydbergDephasing;
  double gamma4 = kDefaultRydbergDephasing;
  double od = 0.0;

  /// Gamma = 2 gamma2, the |2> -> |1> decay rate.
  double natural_linewidth() const { return 2.0 * gamma2; }

  /// Throws std::invalid_argument on negative rates, non-finite values or gamma2 <= 0.
  void validate() const;
  /// validate() plus omega_p > 0, required whenever a spectrum is produced.
  void validate_for_synthesis() const;

  bool operator==(const SystemParams&) const = default;
};

/// Radial transition dipole of the MW transition |3> <-> |4>.
struct DipoleTransition {
  double dipole_moment = 1926.0;  // e a0
  double mw_frequency = 36.8961e9;  // Hz, informational

  void validate() const;
};

/// |E| = 2 pi hbar delta_f / mu, in V/m. mu in units of e a0.
double field_from_splitting(double delta_f_hz, double mu_ea0);
/// Inverse of field_from_splitting.
double splitting_from_field(double field_v_per_m, double mu_ea0);

// Flat JSON object with Hz-valued keys (omega_p_hz, ..., od).
void to_json(nlohmann::json& j, const SystemParams& p);
void from_json(const nlohmann::json& j, SystemParams& p);

}  // namespace rydmw
