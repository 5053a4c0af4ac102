#pragma once

// Parameter sweeps: one synthesized spectrum per point, both extraction
// routes, and a report that serializes deterministically.

#include "rydmw/fitting.hpp"
#include "rydmw/noise.hpp"
#include "rydmw/params.hpp"
#include "rydmw/spectrum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rydmw {

enum class Regime { DEIT, CROSSOVER, DATS, EIA_ATS };

// Declared boundaries; the physics only says "<", "~" and ">>".
inline constexpr double kDeitBelow = 0.5;    // Omega_c < 0.5 Gamma
inline constexpr double kDatsAbove = 2.0;    // Omega_c > 2 Gamma
inline constexpr double kFarDetuned = 10.0;  // |Delta_c| >= 10 max(Omega_c, Gamma)

Regime classify(const SystemParams& p);
std::string_view to_string(Regime r);

/// Omega_mw = cal sqrt(10^(dbm/10)); cal in rad/s per sqrt(mW).
double mw_power_to_rabi(double power_dbm, double cal);

enum class SweepAxis { OmegaMw, MwPower, Od, OmegaC, DeltaC };
std::string_view to_string(SweepAxis a);
std::optional<SweepAxis> parse_axis(std::string_view name);

struct SweepConfig {
  SweepAxis axis = SweepAxis::OmegaMw;
  /// rad/s for frequency axes, dBm for MwPower, plain number for Od.
  std::vector<double> values;
  SystemParams base;
  GridSpec grid{-mhz(20.0), mhz(20.0), 2001};
  std::optional<NoiseModel> noise;  // its seed is the master seed
  ExtractionConfig extraction;      // nominal is replaced by each point's truth
  double mw_calibration = 0.0;      // only for MwPower
  int jobs = 1;
};

struct SweepPoint {
  double value = 0.0;
  SystemParams truth;
  Regime regime = Regime::EIA_ATS;
  ExtractionResult result;
  std::optional<double> deviation_true_pct;        // local route vs the true Omega_mw
  std::optional<double> deviation_prime_true_pct;  // global route vs the true Omega_mw
  std::string error;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepPoint> points;
};

/// Point parameters for value `v` on `axis`.
SystemParams sweep_point_params(const SweepConfig& config, double v);

/// Points are independent and run in parallel; each point's noise seed is
/// derived from (master seed, index). Per-point failures land in
/// SweepPoint::error.
SweepReport run_sweep(const SweepConfig& config);

/// Least-squares slope of 2 pi delta_f against the true Omega_mw, using points
/// with Omega_mw in [lo, hi] that produced a local splitting.
double rabi_slope(const SweepReport& report, double lo, double hi);

nlohmann::json to_json(const SweepReport& report);
void write_csv(const SweepReport& report, std::ostream& out);

}  // namespace rydmw
