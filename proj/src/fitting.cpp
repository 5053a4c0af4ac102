#include "rydmw/fitting.hpp"

#include "rydmw/errors.hpp"
#include "rydmw/kernels.hpp"
#include "rydmw/susceptibility.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rydmw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnit = mhz(1.0);  // internal fit unit for frequencies
constexpr std::size_t kModelSamples = 8001;

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  const auto mid = v.begin() + std::ptrdiff_t(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

double outer_background(const std::vector<double>& t) {
  const std::size_t k = std::max<std::size_t>(1, std::size_t(std::lround(0.05 * double(t.size()))));
  std::vector<double> outer(t.begin(), t.begin() + std::ptrdiff_t(k));
  outer.insert(outer.end(), t.end() - std::ptrdiff_t(k), t.end());
  return median(std::move(outer));
}

std::vector<Dip> most_prominent(std::vector<Dip> dips, std::size_t keep) {
  std::stable_sort(dips.begin(), dips.end(),
                   [](const Dip& a, const Dip& b) { return a.prominence > b.prominence; });
  dips.resize(std::min(keep, dips.size()));
  std::sort(dips.begin(), dips.end(), [](const Dip& a, const Dip& b) { return a.location < b.location; });
  return dips;
}

Spectrum model_spectrum(const SystemParams& p, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("model span must have lo < hi");
  Spectrum m;
  m.grid = GridSpec{lo, hi, kModelSamples}.values();
  m.transmission.resize(m.grid.size());
  kernels::transmission(p, m.grid, m.transmission);
  return m;
}

// d/d(delta) of Im rho21 / (Omega_p/2); zero at every extremum of the transmission.
double absorption_slope(const SystemParams& p, double delta) {
  const ComplexDetunings d(p, delta);
  const double mw2 = 0.25 * p.omega_mw * p.omega_mw;
  const double c2q = 0.25 * p.omega_c * p.omega_c;
  const cplx num = d.d3() * d.d4() - mw2;
  const cplx dnum = d.d3() + d.d4();
  const cplx den = d.d2() * d.d3() * d.d4() - d.d2() * mw2 - d.d4() * c2q;
  const cplx dden = d.d3() * d.d4() + d.d2() * d.d4() + d.d2() * d.d3() - mw2 - c2q;
  return ((dnum * den - num * dden) / (den * den)).imag();
}

// Minimum of the model transmission between two samples bracketing a dip.
double refine_minimum(const SystemParams& p, double lo, double hi) {
  const double flo = absorption_slope(p, lo);
  const double fhi = absorption_slope(p, hi);
  if (flo > 0.0 && fhi < 0.0) {
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        [&](double x) { return absorption_slope(p, x); }, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (a + b);
  }
  const auto best = boost::math::tools::brent_find_minima([&](double x) { return transmit(p, x); }, lo, hi,
                                                          std::numeric_limits<double>::digits / 2);
  return best.first;
}

double crossing(const std::function<double(double)>& f, double a, double b) {
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  std::uintmax_t iters = 200;
  const auto [x0, x1] = boost::math::tools::toms748_solve(f, a, b, tol, iters);
  return 0.5 * (x0 + x1);
}

struct Slot {
  double SystemParams::*field;
  double unit;
  double lower;
  double typical;
};

constexpr std::array<Slot, kFitParamCount> kSlots{{
    {&SystemParams::od, 1.0, 0.0, 1.0},
    {&SystemParams::omega_c, kUnit, 0.0, 0.1},
    {&SystemParams::delta_mw, kUnit, -kInf, 0.1},
    {&SystemParams::omega_mw, kUnit, 0.0, 0.1},
    {&SystemParams::gamma3, kUnit, 0.0, 0.01},
    {&SystemParams::gamma4, kUnit, 0.0, 0.01},
}};

}  // namespace

// ---------------------------------------------------------------- dips

std::vector<Dip> find_dips(const Spectrum& s, double min_prominence) {
  const auto& t = s.transmission;
  const std::size_t n = t.size();
  std::vector<Dip> dips;
  if (n < 5) return dips;

  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(t[i] < t[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && t[j + 1] == t[i]) ++j;
    if (j + 1 < n && t[j + 1] > t[i]) {
      const double v = t[i];
      double left = v;
      for (std::size_t k = i; k-- > 0;) {
        if (t[k] < v) break;
        left = std::max(left, t[k]);
      }
      double right = v;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (t[k] < v) break;
        right = std::max(right, t[k]);
      }
      const double prominence = std::min(left, right) - v;
      if (prominence >= min_prominence) {
        const std::size_t mid = (i + j) / 2;
        dips.push_back({mid, s.grid[mid], v, prominence});
      }
    }
    i = j + 1;
  }
  return dips;
}

double estimate_noise_rms(const Spectrum& s) {
  if (s.size() < 3) return 0.0;
  std::vector<double> diffs(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    diffs[i] = std::abs(s.transmission[i + 1] - s.transmission[i]);
  return 1.4826 * median(std::move(diffs)) / std::sqrt(2.0);
}

double default_prominence(const Spectrum& s) { return std::max(0.01, 8.0 * estimate_noise_rms(s)); }

double estimate_half_width(const Spectrum& s, const Dip& dip) {
  const auto& t = s.transmission;
  const auto& g = s.grid;
  const double level = dip.transmission + 0.5 * dip.prominence;

  std::size_t k = dip.index;
  while (k > 0 && t[k] < level) --k;
  const double left = t[k] >= level && k < dip.index
                          ? g[k] + (level - t[k]) * (g[k + 1] - g[k]) / (t[k + 1] - t[k])
                          : g[k];
  k = dip.index;
  while (k + 1 < t.size() && t[k] < level) ++k;
  const double right = t[k] >= level && k > dip.index
                           ? g[k - 1] + (level - t[k - 1]) * (g[k] - g[k - 1]) / (t[k] - t[k - 1])
                           : g[k];
  return 0.5 * (right - left);
}

// ---------------------------------------------------------------- local route

double LorentzianFit::operator()(double delta) const {
  const double w2 = half_width * half_width;
  const double x = delta - center;
  return offset - amplitude * w2 / (x * x + w2);
}

LorentzianFit fit_lorentzian_local(const Spectrum& s, double dip_location, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be > 0");
  if (dip_location - window < s.grid.front() || dip_location + window > s.grid.back())
    throw FitError("Lorentzian window clipped at spectrum edge");

  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::abs(s.grid[i] - dip_location) <= window) {
      x.push_back(s.grid[i] / kUnit);
      y.push_back(s.transmission[i]);
    }
  if (x.size() < 7) throw std::invalid_argument("Lorentzian window holds fewer than 7 points");

  const double offset0 = std::max(y.front(), y.back());
  const double depth0 = offset0 - *std::min_element(y.begin(), y.end());

  LmProblem problem;
  problem.residual_count = x.size();
  problem.lower = {-kInf, 1e-12, -kInf, -kInf};
  problem.upper = {kInf, kInf, kInf, kInf};
  const double wtyp = window / kUnit;
  problem.typical = {wtyp, wtyp, std::max(depth0, 1e-3), std::max(offset0, 1e-3)};
  problem.residuals = [&](std::span<const double> q, std::span<double> r) {
    const double w2 = q[1] * q[1];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double dx = x[i] - q[0];
      r[i] = q[3] - q[2] * w2 / (dx * dx + w2) - y[i];
    }
  };

  const LmResult res = levenberg_marquardt(
      problem, {dip_location / kUnit, window / 1.5 / kUnit, std::max(depth0, 1e-6), offset0});
  if (!res.converged) throw FitError("Lorentzian fit did not converge: " + res.reason);

  LorentzianFit fit;
  fit.center = res.x[0] * kUnit;
  fit.half_width = res.x[1] * kUnit;
  fit.amplitude = res.x[2];
  fit.offset = res.x[3];
  fit.residual_rms = std::sqrt(res.sum_squares / double(x.size()));
  fit.iterations = res.iterations;
  fit.points = x.size();
  return fit;
}

AtsExtraction extract_ats_detailed(const Spectrum& s, const LocalConfig& config) {
  const double prominence = config.min_prominence.value_or(default_prominence(s));
  const std::vector<Dip> all = find_dips(s, prominence);
  if (all.size() < 2) throw DipCountError(2, all.size());

  AtsExtraction out;
  out.discarded_dips = all.size() - 2;
  const std::vector<Dip> dips = most_prominent(all, 2);

  const std::size_t half_points = (config.min_window_points - 1) / 2;
  for (std::size_t k = 0; k < 2; ++k) {
    const Dip& dip = dips[k];
    if (dip.index < half_points || dip.index + half_points >= s.size())
      throw FitError("Lorentzian window clipped at spectrum edge");
    const double span = std::max(dip.location - s.grid[dip.index - half_points],
                                 s.grid[dip.index + half_points] - dip.location);
    const double window = std::max(config.window_factor * estimate_half_width(s, dip), span);
    out.fits[k] = fit_lorentzian_local(s, dip.location, window);
  }
  out.delta_f_hz = angular_to_hz(std::abs(out.fits[1].center - out.fits[0].center));
  return out;
}

double extract_ats(const Spectrum& s, const LocalConfig& config) {
  return extract_ats_detailed(s, config).delta_f_hz;
}

// ---------------------------------------------------------------- global route

GlobalFit fit_global(const Spectrum& s, const SystemParams& initial, const FitMask& mask,
                     const LmOptions& options) {
  s.validate();
  initial.validate_for_synthesis();

  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < kFitParamCount; ++k)
    if (mask.free[k]) free.push_back(k);
  if (free.empty()) throw std::invalid_argument("no free parameters");

  LmProblem problem;
  problem.residual_count = s.size();
  std::vector<double> x0;
  for (std::size_t k : free) {
    const Slot& slot = kSlots[k];
    problem.lower.push_back(slot.lower);
    problem.upper.push_back(kInf);
    problem.typical.push_back(slot.typical);
    x0.push_back(initial.*slot.field / slot.unit);
  }

  auto unpack = [&](std::span<const double> x) {
    SystemParams p = initial;
    for (std::size_t i = 0; i < free.size(); ++i) p.*kSlots[free[i]].field = x[i] * kSlots[free[i]].unit;
    return p;
  };

  std::vector<double> model(s.size());
  problem.residuals = [&](std::span<const double> x, std::span<double> r) {
    try {
      kernels::transmission(unpack(x), s.grid, model);
      for (std::size_t i = 0; i < model.size(); ++i) r[i] = model[i] - s.transmission[i];
    } catch (const DegenerateError&) {
      std::fill(r.begin(), r.end(), 1e3);
    }
  };

  const LmResult res = levenberg_marquardt(problem, x0, options);

  GlobalFit fit;
  fit.params = unpack(res.x);
  fit.mask = mask;
  fit.residual_rms = std::sqrt(res.sum_squares / double(s.size()));
  fit.converged = res.converged;
  fit.iterations = res.iterations;
  fit.gradient_norm = res.gradient_norm;
  fit.stop_reason = res.reason;
  return fit;
}

SystemParams seed_global_fit(const Spectrum& s, const SystemParams& nominal, const FitMask& mask) {
  SystemParams p = nominal;
  if (mask.is_free(FitParam::Gamma3)) p.gamma3 = kDefaultRydbergDephasing;
  if (mask.is_free(FitParam::Gamma4)) p.gamma4 = kDefaultRydbergDephasing;

  const std::vector<Dip> dips = most_prominent(find_dips(s, default_prominence(s)), 2);
  const bool eia = p.delta_c != 0.0 &&
                   std::abs(p.delta_c) >= 10.0 * std::max(p.omega_c, p.natural_linewidth());
  if (dips.size() == 2) {
    if (mask.is_free(FitParam::OmegaMw)) p.omega_mw = dips[1].location - dips[0].location;
    // Pole sum of the two-level effective model: delta_+ + delta_- = Delta_mw - Delta_AC.
    if (mask.is_free(FitParam::DeltaMw) && eia)
      p.delta_mw = (dips[0].location + dips[1].location) + p.omega_c * p.omega_c / (4.0 * p.delta_c);
  } else if (mask.is_free(FitParam::OmegaMw)) {
    // Zero is a stationary point in Omega_mw; start just off it.
    p.omega_mw = khz(100.0);
  }

  if (mask.is_free(FitParam::Od)) {
    const auto it = std::min_element(s.transmission.begin(), s.transmission.end());
    const double tmin = std::max(*it, 1e-6);
    const double at = s.grid[std::size_t(it - s.transmission.begin())];
    try {
      const double absorption = p.gamma2 * normalized_coherence(p, at).imag();
      if (absorption > 0.0 && tmin < 1.0) p.od = std::clamp(-std::log(tmin) / absorption, 1e-3, 1e4);
    } catch (const DegenerateError&) {
    }
  }
  return p;
}

SystemParams seed_global_fit(const Spectrum& s, const SystemParams& nominal) {
  return seed_global_fit(s, nominal, FitMask{});
}

GlobalFit fit_global_auto(const Spectrum& s, const SystemParams& nominal, const FitMask& mask,
                          const LmOptions& options) {
  const SystemParams seed = seed_global_fit(s, nominal, mask);
  GlobalFit best = fit_global(s, seed, mask, options);
  const double floor = std::max(3.0 * estimate_noise_rms(s), 1e-9);
  if (mask.is_free(FitParam::OmegaMw) && best.residual_rms > floor) {
    for (double factor : {0.5, 2.0}) {
      SystemParams alt = seed;
      alt.omega_mw *= factor;
      GlobalFit fit = fit_global(s, alt, mask, options);
      if (fit.residual_rms < best.residual_rms) best = std::move(fit);
    }
  }
  return best;
}

double model_splitting(const SystemParams& p, double lo, double hi) {
  const Spectrum m = model_spectrum(p, lo, hi);
  const std::vector<Dip> dips = most_prominent(find_dips(m, 1e-9), 2);
  if (dips.size() < 2) throw DipCountError(2, dips.size());
  std::array<double, 2> at{};
  for (std::size_t k = 0; k < 2; ++k)
    at[k] = refine_minimum(p, m.grid[dips[k].index - 1], m.grid[dips[k].index + 1]);
  return angular_to_hz(std::abs(at[1] - at[0]));
}

double splitting_from_model(const GlobalFit& fit, double lo, double hi) {
  return model_splitting(fit.params, lo, hi);
}

double model_fwhm(const SystemParams& p, double lo, double hi) {
  const Spectrum m = model_spectrum(p, lo, hi);
  const std::vector<Dip> dips = most_prominent(find_dips(m, 1e-9), 1);
  if (dips.empty()) throw DipCountError(1, 0);
  const std::size_t i = dips.front().index;
  const double center = refine_minimum(p, m.grid[i - 1], m.grid[i + 1]);
  const double half = 0.5 * (outer_background(m.transmission) + transmit(p, center));
  const auto f = [&](double x) { return transmit(p, x) - half; };

  std::size_t k = i;
  while (k > 0 && m.transmission[k] < half) --k;
  std::size_t r = i;
  while (r + 1 < m.size() && m.transmission[r] < half) ++r;
  if (m.transmission[k] < half || m.transmission[r] < half)
    throw FitError("dip not resolved inside the model span");
  const double left = crossing(f, m.grid[k], std::max(m.grid[k + 1], std::min(center, m.grid[i])));
  const double right = crossing(f, std::min(m.grid[r - 1], std::max(center, m.grid[i])), m.grid[r]);
  return right - left;
}

// ---------------------------------------------------------------- metrics

double deviation(double delta_f_hz, double omega_mw) {
  if (!(omega_mw > 0.0)) throw std::invalid_argument("deviation needs Omega_mw > 0");
  return 100.0 * (hz_to_angular(delta_f_hz) - omega_mw) / omega_mw;
}

double eia_linewidth(const Spectrum& no_mw, const SystemParams& nominal) {
  const auto dips = find_dips(no_mw, default_prominence(no_mw));
  if (dips.size() != 1) throw DipCountError(1, dips.size());

  SystemParams start = nominal;
  start.omega_mw = 0.0;
  FitMask mask;
  mask.fix(FitParam::OmegaMw).fix(FitParam::DeltaMw).fix(FitParam::Gamma4);
  const GlobalFit fit = fit_global_auto(no_mw, start, mask);
  if (!fit.converged) throw FitError("linewidth fit did not converge: " + fit.stop_reason);
  return model_fwhm(fit.params, no_mw.grid.front(), no_mw.grid.back());
}

double visibility(const Spectrum& s) {
  const std::vector<Dip> dips = find_dips(s, default_prominence(s));
  if (dips.size() != 2) throw DipCountError(2, dips.size());
  const auto& t = s.transmission;
  const double t_min = std::min(dips[0].transmission, dips[1].transmission);
  const double t_max = *std::max_element(t.begin() + std::ptrdiff_t(dips[0].index),
                                         t.begin() + std::ptrdiff_t(dips[1].index) + 1);
  const double bg = outer_background(t);
  if (!(bg > 0.0)) throw std::invalid_argument("background transmission is zero");
  return (t_max - t_min) / bg;
}

// ---------------------------------------------------------------- both routes

ExtractionResult extract(const Spectrum& s, const ExtractionConfig& config) {
  ExtractionResult out;

  if (config.pipeline != Pipeline::Global) {
    try {
      AtsExtraction local = extract_ats_detailed(s, config.local);
      if (config.local_hook) {
        config.local_hook(local);
        local.delta_f_hz = angular_to_hz(std::abs(local.fits[1].center - local.fits[0].center));
      }
      out.delta_f_hz = local.delta_f_hz;
      out.field_v_per_m = field_from_splitting(local.delta_f_hz, config.dipole.dipole_moment);
      out.local = std::move(local);
    } catch (const std::exception& e) {
      out.local_error = e.what();
    }
  }

  if (config.pipeline != Pipeline::Local) {
    try {
      GlobalFit fit = fit_global_auto(s, config.nominal, config.mask, config.lm);
      if (config.global_hook) config.global_hook(fit);
      out.omega_mw_recovered = fit.params.omega_mw;
      if (!fit.converged) out.global_error = "global fit did not converge: " + fit.stop_reason;
      try {
        out.delta_f_prime_hz = splitting_from_model(fit, s.grid.front(), s.grid.back());
      } catch (const std::exception& e) {
        if (out.global_error.empty()) out.global_error = e.what();
      }
      out.global = std::move(fit);
    } catch (const std::exception& e) {
      out.global_error = e.what();
    }
  }

  std::optional<double> reference = config.reference_omega_mw;
  if (out.omega_mw_recovered && *out.omega_mw_recovered > 0.0) reference = out.omega_mw_recovered;
  if (reference && *reference > 0.0) {
    if (out.delta_f_hz) out.deviation_pct = deviation(*out.delta_f_hz, *reference);
    if (out.delta_f_prime_hz) out.deviation_prime_pct = deviation(*out.delta_f_prime_hz, *reference);
  }
  return out;
}

nlohmann::json to_json(const ExtractionResult& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {
      {"delta_f_hz", opt(r.delta_f_hz)},
      {"delta_f_prime_hz", opt(r.delta_f_prime_hz)},
      {"omega_mw_hz", r.omega_mw_recovered ? nlohmann::json(angular_to_hz(*r.omega_mw_recovered))
                                           : nlohmann::json(nullptr)},
      {"deviation_pct", opt(r.deviation_pct)},
      {"deviation_prime_pct", opt(r.deviation_prime_pct)},
      {"field_v_per_m", opt(r.field_v_per_m)},
  };
}

}  // namespace rydmw
