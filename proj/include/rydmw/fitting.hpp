#pragma once

// Splitting extraction. Two independent routes share nothing but the Spectrum:
//
//  - local:  find transmission dips, fit each with a Lorentzian over a window
//            that excludes its partner, delta_f = distance between centers.
//  - global: least-squares fit of the full closed-form transmission with
//            OD, Omega_c, Delta_mw, Omega_mw, gamma3, gamma4 free; delta_f' is
//            the distance between the two minima of the fitted model.

#include "rydmw/least_squares.hpp"
#include "rydmw/params.hpp"
#include "rydmw/spectrum.hpp"

#include <json.hpp>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rydmw {

// ---------------------------------------------------------------- dips

struct Dip {
  std::size_t index = 0;
  double location = 0.0;      // rad/s
  double transmission = 0.0;
  double prominence = 0.0;    // depth below the lower of the two bounding maxima
};

/// Local minima with prominence >= min_prominence, ascending in delta.
/// Spectra shorter than five points yield no dips.
std::vector<Dip> find_dips(const Spectrum& s, double min_prominence);

/// Robust point-to-point noise estimate (MAD of first differences).
double estimate_noise_rms(const Spectrum& s);

/// Prominence threshold used when none is configured: max(0.01, 8 sigma).
double default_prominence(const Spectrum& s);

/// Half width at half prominence, linearly interpolated.
double estimate_half_width(const Spectrum& s, const Dip& dip);

// ---------------------------------------------------------------- local route

struct LorentzianFit {
  double center = 0.0;      // rad/s
  double half_width = 0.0;  // rad/s
  double amplitude = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  std::size_t points = 0;

  /// offset - amplitude w^2 / ((delta - center)^2 + w^2)
  double operator()(double delta) const;
};

/// Fits the points with |delta - dip_location| <= window. Needs >= 7 points.
/// Throws FitError on non-convergence or when the window leaves the grid.
LorentzianFit fit_lorentzian_local(const Spectrum& s, double dip_location, double window);

struct LocalConfig {
  std::optional<double> min_prominence;  // default_prominence() when unset
  double window_factor = 1.5;            // window = factor x estimated half-width
  std::size_t min_window_points = 11;
};

struct AtsExtraction {
  double delta_f_hz = 0.0;
  std::array<LorentzianFit, 2> fits{};
  std::size_t discarded_dips = 0;
};

/// Throws DipCountError when fewer than two dips are found. With more than
/// two, keeps the two most prominent and reports how many were dropped.
AtsExtraction extract_ats_detailed(const Spectrum& s, const LocalConfig& config = {});
double extract_ats(const Spectrum& s, const LocalConfig& config = {});

// ---------------------------------------------------------------- global route

enum class FitParam { Od = 0, OmegaC, DeltaMw, OmegaMw, Gamma3, Gamma4 };
inline constexpr std::size_t kFitParamCount = 6;

struct FitMask {
  std::array<bool, kFitParamCount> free{true, true, true, true, true, true};

  bool is_free(FitParam p) const { return free[std::size_t(p)]; }
  FitMask& fix(FitParam p) {
    free[std::size_t(p)] = false;
    return *this;
  }
};

struct GlobalFit {
  SystemParams params;  // fitted; delta_c, gamma2, omega_p as supplied
  FitMask mask;
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string stop_reason;
};

/// Damped least squares from `initial`. Non-convergence is reported through
/// GlobalFit::converged with the best parameters found.
GlobalFit fit_global(const Spectrum& s, const SystemParams& initial, const FitMask& mask = {},
                     const LmOptions& options = {});

/// Initial guess from the data: Omega_mw from the dip separation, Delta_mw from
/// the dip midpoint (EIA regime), gamma3 = gamma4 = 2pi x 50 kHz, OD from the
/// deepest point. Everything else comes from `nominal`; parameters fixed by
/// `mask` are never touched.
SystemParams seed_global_fit(const Spectrum& s, const SystemParams& nominal);
SystemParams seed_global_fit(const Spectrum& s, const SystemParams& nominal, const FitMask& mask);

/// seed_global_fit + fit_global, restarting from 0.5x and 2x Omega_mw when the
/// first fit leaves residuals well above the noise floor.
GlobalFit fit_global_auto(const Spectrum& s, const SystemParams& nominal, const FitMask& mask = {},
                          const LmOptions& options = {});

/// Distance (Hz) between the two most prominent minima of the noise-free model
/// transmission inside [lo, hi]. Throws DipCountError with fewer than two.
double model_splitting(const SystemParams& p, double lo, double hi);
double splitting_from_model(const GlobalFit& fit, double lo, double hi);

/// FWHM (rad/s) of the single transmission dip of the model inside [lo, hi].
double model_fwhm(const SystemParams& p, double lo, double hi);

// ---------------------------------------------------------------- metrics

/// 100 (2 pi delta_f - Omega_mw) / Omega_mw. Rejects omega_mw <= 0.
double deviation(double delta_f_hz, double omega_mw);

/// EIA FWHM (rad/s) of a spectrum without MW: fits OD, Omega_c, gamma3 with
/// Omega_mw = 0 and measures the fitted model. Rejects multi-dip input.
double eia_linewidth(const Spectrum& no_mw, const SystemParams& nominal);

/// (T_max between dips - T at the deeper dip) / T_bg, T_bg = median of the
/// outer 10 % of samples. Requires exactly two dips.
double visibility(const Spectrum& s);

// ---------------------------------------------------------------- both routes

enum class Pipeline { Local, Global, Both };

struct ExtractionConfig {
  Pipeline pipeline = Pipeline::Both;
  LocalConfig local;
  SystemParams nominal;  // fixed Delta_c, gamma2, Omega_p and the Omega_c seed
  FitMask mask;
  LmOptions lm;
  DipoleTransition dipole;
  /// Omega_mw used for the deviations when the global route is not run.
  std::optional<double> reference_omega_mw;

  // Test seams: run on each route's intermediate before it is reduced.
  std::function<void(AtsExtraction&)> local_hook;
  std::function<void(GlobalFit&)> global_hook;
};

struct ExtractionResult {
  std::optional<double> delta_f_hz;
  std::optional<double> delta_f_prime_hz;
  std::optional<double> omega_mw_recovered;  // rad/s
  std::optional<double> deviation_pct;
  std::optional<double> deviation_prime_pct;
  std::optional<double> field_v_per_m;

  std::optional<AtsExtraction> local;
  std::optional<GlobalFit> global;
  std::string local_error;
  std::string global_error;
};

ExtractionResult extract(const Spectrum& s, const ExtractionConfig& config);

/// {"delta_f_hz", "delta_f_prime_hz", "omega_mw_hz", "deviation_pct",
///  "deviation_prime_pct", "field_v_per_m"}; missing values are null.
nlohmann::json to_json(const ExtractionResult& r);

}  // namespace rydmw
