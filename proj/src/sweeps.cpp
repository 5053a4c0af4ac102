#include "rydmw/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace rydmw {

Regime classify(const SystemParams& p) {
  const double gamma = p.natural_linewidth();
  if (std::abs(p.delta_c) >= kFarDetuned * std::max(p.omega_c, gamma)) return Regime::EIA_ATS;
  if (p.omega_c < kDeitBelow * gamma) return Regime::DEIT;
  if (p.omega_c > kDatsAbove * gamma) return Regime::DATS;
  return Regime::CROSSOVER;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::DEIT: return "DEIT";
    case Regime::CROSSOVER: return "CROSSOVER";
    case Regime::DATS: return "DATS";
    case Regime::EIA_ATS: return "EIA_ATS";
  }
  return "?";
}

double mw_power_to_rabi(double power_dbm, double cal) {
  if (!(cal > 0.0)) throw std::invalid_argument("calibration constant must be > 0");
  return cal * std::sqrt(std::pow(10.0, power_dbm / 10.0));
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::OmegaMw: return "omega-mw";
    case SweepAxis::MwPower: return "mw-power";
    case SweepAxis::Od: return "od";
    case SweepAxis::OmegaC: return "omega-c";
    case SweepAxis::DeltaC: return "delta-c";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (auto a : {SweepAxis::OmegaMw, SweepAxis::MwPower, SweepAxis::Od, SweepAxis::OmegaC, SweepAxis::DeltaC})
    if (to_string(a) == name) return a;
  return std::nullopt;
}

SystemParams sweep_point_params(const SweepConfig& config, double v) {
  SystemParams p = config.base;
  switch (config.axis) {
    case SweepAxis::OmegaMw: p.omega_mw = v; break;
    case SweepAxis::MwPower: p.omega_mw = mw_power_to_rabi(v, config.mw_calibration); break;
    case SweepAxis::Od: p.od = v; break;
    case SweepAxis::OmegaC: p.omega_c = v; break;
    case SweepAxis::DeltaC: p.delta_c = v; break;
  }
  p.validate_for_synthesis();
  return p;
}

namespace {

void check_monotone(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("sweep needs at least one value");
  bool up = true, down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    up = up && v[i] > v[i - 1];
    down = down && v[i] < v[i - 1];
  }
  if (!up && !down) throw std::invalid_argument("sweep values must be strictly monotone");
}

SweepPoint run_point(const SweepConfig& config, std::size_t index) {
  SweepPoint pt;
  pt.value = config.values[index];
  try {
    pt.truth = sweep_point_params(config, pt.value);
    pt.regime = classify(pt.truth);
    std::optional<NoiseModel> noise = config.noise;
    if (noise) noise->seed = derive_seed(config.noise->seed, index);
    const Spectrum s = synthesize(pt.truth, config.grid, noise);

    ExtractionConfig ex = config.extraction;
    ex.nominal = pt.truth;
    if (!ex.reference_omega_mw) ex.reference_omega_mw = pt.truth.omega_mw;
    pt.result = extract(s, ex);

    if (pt.truth.omega_mw > 0.0) {
      if (pt.result.delta_f_hz) pt.deviation_true_pct = deviation(*pt.result.delta_f_hz, pt.truth.omega_mw);
      if (pt.result.delta_f_prime_hz)
        pt.deviation_prime_true_pct = deviation(*pt.result.delta_f_prime_hz, pt.truth.omega_mw);
    }
    std::string joined = pt.result.local_error;
    if (!pt.result.global_error.empty()) joined += (joined.empty() ? "" : "; ") + pt.result.global_error;
    pt.error = joined;
  } catch (const std::exception& e) {
    pt.error = e.what();
  }
  return pt;
}

}  // namespace

SweepReport run_sweep(const SweepConfig& config) {
  check_monotone(config.values);
  if (config.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  config.base.validate();
  if (config.noise) config.noise->validate();

  SweepReport report;
  report.config = config;
  report.points.resize(config.values.size());
  const auto n = static_cast<std::ptrdiff_t>(config.values.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) report.points[std::size_t(i)] = run_point(config, std::size_t(i));
  return report;
}

double rabi_slope(const SweepReport& report, double lo, double hi) {
  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (const auto& pt : report.points) {
    const double x = pt.truth.omega_mw;
    if (x < lo || x > hi || !pt.result.delta_f_hz) continue;
    const double y = hz_to_angular(*pt.result.delta_f_hz);
    sxx += x * x;
    sxy += x * y;
    sx += x;
    sy += y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("slope needs at least two points with a splitting");
  const double dn = double(n);
  return (sxy - sx * sy / dn) / (sxx - sx * sx / dn);
}

// ---------------------------------------------------------------- output

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string csv_field(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::Local: return "local";
    case Pipeline::Global: return "global";
    case Pipeline::Both: return "both";
  }
  return "?";
}

double value_for_output(SweepAxis axis, double v) {
  return (axis == SweepAxis::MwPower || axis == SweepAxis::Od) ? v : angular_to_hz(v);
}

std::string value_unit(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::MwPower: return "dBm";
    case SweepAxis::Od: return "1";
    default: return "Hz";
  }
}

}  // namespace

nlohmann::json to_json(const SweepReport& report) {
  const SweepConfig& c = report.config;
  nlohmann::json values = nlohmann::json::array();
  for (double v : c.values) values.push_back(value_for_output(c.axis, v));

  nlohmann::json config = {
      {"base", c.base},
      {"grid", {{"start_hz", angular_to_hz(c.grid.start)}, {"stop_hz", angular_to_hz(c.grid.stop)}, {"points", c.grid.points}}},
      {"pipeline", pipeline_name(c.extraction.pipeline)},
      {"dipole_moment_ea0", c.extraction.dipole.dipole_moment},
  };
  if (c.noise)
    config["noise"] = {{"additive_rms", c.noise->additive_rms},
                       {"two_photon_jitter_hz", angular_to_hz(c.noise->two_photon_jitter)},
                       {"seed", c.noise->seed}};
  if (c.axis == SweepAxis::MwPower) config["mw_calibration_rad_s_per_sqrt_mw"] = c.mw_calibration;

  nlohmann::json points = nlohmann::json::array();
  for (const auto& pt : report.points) {
    nlohmann::json j = {
        {"value", value_for_output(c.axis, pt.value)},
        {"regime", std::string(to_string(pt.regime))},
        {"omega_mw_true_hz", angular_to_hz(pt.truth.omega_mw)},
        {"result", to_json(pt.result)},
        {"deviation_true_pct", opt(pt.deviation_true_pct)},
        {"deviation_prime_true_pct", opt(pt.deviation_prime_true_pct)},
        {"error", pt.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(pt.error)},
    };
    points.push_back(std::move(j));
  }
  return {{"axis", {{"name", std::string(to_string(c.axis))}, {"unit", value_unit(c.axis)}, {"values", values}}},
          {"config", config},
          {"points", points}};
}

void write_csv(const SweepReport& report, std::ostream& out) {
  out << "index,value,regime,omega_mw_true_hz,delta_f_hz,delta_f_prime_hz,omega_mw_hz,deviation_pct,"
         "deviation_prime_pct,deviation_true_pct,deviation_prime_true_pct,field_v_per_m,error\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& pt = report.points[i];
    const auto& r = pt.result;
    std::optional<double> omega_hz;
    if (r.omega_mw_recovered) omega_hz = angular_to_hz(*r.omega_mw_recovered);
    std::string err = pt.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << i << ',' << csv_field(value_for_output(report.config.axis, pt.value)) << ',' << to_string(pt.regime)
        << ',' << csv_field(angular_to_hz(pt.truth.omega_mw)) << ',' << csv_field(r.delta_f_hz) << ','
        << csv_field(r.delta_f_prime_hz) << ',' << csv_field(omega_hz) << ',' << csv_field(r.deviation_pct) << ','
        << csv_field(r.deviation_prime_pct) << ',' << csv_field(pt.deviation_true_pct) << ','
        << csv_field(pt.deviation_prime_true_pct) << ',' << csv_field(r.field_v_per_m) << ',' << err << '\n';
  }
}

}  // namespace rydmw
