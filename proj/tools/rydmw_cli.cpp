// rydmw: simulate, fit, sweep, classify, validate.
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage / parse error, 3 fit did not converge.

#include "rydmw/errors.hpp"
#include "rydmw/fitting.hpp"
#include "rydmw/presets.hpp"
#include "rydmw/spectrum.hpp"
#include "rydmw/sweeps.hpp"
#include "rydmw/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace rydmw;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;
constexpr int kNoConvergence = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::string preset;
  std::string params_file;
  std::optional<double> omega_p, omega_c, omega_mw, delta_c, delta_mw, gamma2, gamma3, gamma4, od;

  void bind(CLI::App* app) {
    app->add_option("--preset", preset, "eia | deit | crossover | dats");
    app->add_option("--params", params_file, "SystemParams JSON file (Hz keys)");
    app->add_option("--omega-p-mhz", omega_p, "probe Rabi frequency / 2pi");
    app->add_option("--omega-c-mhz", omega_c, "coupling Rabi frequency / 2pi");
    app->add_option("--omega-mw-mhz", omega_mw, "MW Rabi frequency / 2pi");
    app->add_option("--delta-c-mhz", delta_c, "coupling detuning / 2pi");
    app->add_option("--delta-mw-mhz", delta_mw, "MW detuning / 2pi");
    app->add_option("--gamma2-mhz", gamma2, "probe coherence decay / 2pi");
    app->add_option("--gamma3-mhz", gamma3, "|3> dephasing / 2pi");
    app->add_option("--gamma4-mhz", gamma4, "|4> dephasing / 2pi");
    app->add_option("--od", od, "optical depth");
  }

  SystemParams resolve(std::optional<SystemParams> fallback = std::nullopt) const {
    SystemParams p = fallback.value_or(SystemParams{});
    if (!preset.empty()) {
      const auto found = rydmw::preset(preset);
      if (!found) throw UsageError("unknown preset '" + preset + "'");
      p = *found;
    }
    if (!params_file.empty()) {
      std::ifstream in(params_file);
      if (!in) throw UsageError("cannot open " + params_file);
      try {
        p = nlohmann::json::parse(in).get<SystemParams>();
      } catch (const std::exception& e) {
        throw UsageError(params_file + ": " + e.what());
      }
    }
    auto set = [](double& field, const std::optional<double>& v) {
      if (v) field = mhz(*v);
    };
    set(p.omega_p, omega_p);
    set(p.omega_c, omega_c);
    set(p.omega_mw, omega_mw);
    set(p.delta_c, delta_c);
    set(p.delta_mw, delta_mw);
    set(p.gamma2, gamma2);
    set(p.gamma3, gamma3);
    set(p.gamma4, gamma4);
    if (od) p.od = *od;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

struct GridFlags {
  double from_mhz = -20.0;
  double to_mhz = 20.0;
  std::size_t points = 2001;

  void bind(CLI::App* app) {
    app->add_option("--scan-from-mhz", from_mhz, "first two-photon detuning / 2pi")->capture_default_str();
    app->add_option("--scan-to-mhz", to_mhz, "last two-photon detuning / 2pi")->capture_default_str();
    app->add_option("--scan-points", points, "grid points")->capture_default_str();
  }
  GridSpec spec() const { return {mhz(from_mhz), mhz(to_mhz), points}; }
};

struct NoiseFlags {
  double additive = 0.0;
  double jitter_khz = 0.0;
  std::uint64_t seed = 0;

  void bind(CLI::App* app) {
    app->add_option("--noise", additive, "additive Gaussian noise RMS (transmission units)");
    app->add_option("--jitter-khz", jitter_khz, "two-photon detuning jitter RMS / 2pi");
    app->add_option("--seed", seed, "master seed for every random draw")->capture_default_str();
  }
  std::optional<NoiseModel> model() const {
    if (additive == 0.0 && jitter_khz == 0.0) return std::nullopt;
    NoiseModel n{additive, khz(jitter_khz), seed};
    n.validate();
    return n;
  }
};

Pipeline parse_pipeline(const std::string& s) {
  if (s == "local") return Pipeline::Local;
  if (s == "global") return Pipeline::Global;
  return Pipeline::Both;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string show(const std::optional<double>& v, double scale = 1.0) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v * scale);
  return buf;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const ParamFlags& pf, const GridFlags& gf, const NoiseFlags& nf, const std::string& output) {
  const SystemParams p = pf.resolve();
  Spectrum s;
  try {
    s = synthesize(p, gf.spec(), nf.model());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  save_spectrum(s, output);
  const auto dips = find_dips(s, default_prominence(s));
  double tmin = 1.0;
  for (double t : s.transmission) tmin = std::min(tmin, t);
  std::printf("wrote %s (%zu points) and %s\n", output.c_str(), s.size(), sidecar_path(output).string().c_str());
  std::printf("regime %s, dips %zu, min transmission %.6g\n", std::string(to_string(classify(p))).c_str(),
              dips.size(), tmin);
  return kOk;
}

// ---------------------------------------------------------------- fit

int cmd_fit(const ParamFlags& pf, const std::string& input, const std::string& output, const std::string& pipeline,
            double dipole) {
  Spectrum s;
  try {
    s = load_spectrum(input);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }

  ExtractionConfig cfg;
  cfg.pipeline = parse_pipeline(pipeline);
  cfg.nominal = pf.resolve(s.meta.params);
  cfg.dipole.dipole_moment = dipole;
  cfg.dipole.validate();
  if (cfg.nominal.omega_mw > 0.0) cfg.reference_omega_mw = cfg.nominal.omega_mw;

  const ExtractionResult r = extract(s, cfg);
  write_json(to_json(r), output);

  std::printf("wrote %s\n", output.c_str());
  std::printf("delta_f        %s MHz\n", show(r.delta_f_hz, 1e-6).c_str());
  std::printf("delta_f'       %s MHz\n", show(r.delta_f_prime_hz, 1e-6).c_str());
  std::printf("Omega_mw/2pi   %s MHz\n",
              show(r.omega_mw_recovered ? std::optional<double>(to_mhz(*r.omega_mw_recovered)) : std::nullopt).c_str());
  std::printf("deviation      %s %%\n", show(r.deviation_pct).c_str());
  std::printf("deviation'     %s %%\n", show(r.deviation_prime_pct).c_str());
  std::printf("|E|            %s uV/cm\n", show(r.field_v_per_m, 1e4).c_str());

  int code = kOk;
  if (!r.local_error.empty()) {
    std::fprintf(stderr, "local route failed: %s\n", r.local_error.c_str());
    code = kNoConvergence;
  }
  if (!r.global_error.empty()) {
    std::fprintf(stderr, "global route failed: %s\n", r.global_error.c_str());
    if (r.global)
      std::fprintf(stderr, "  iterations %d, residual rms %.3g, gradient %.3g, stop: %s\n", r.global->iterations,
                   r.global->residual_rms, r.global->gradient_norm, r.global->stop_reason.c_str());
    code = kNoConvergence;
  }
  return code;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::string axis = "omega-mw";
  std::optional<double> from_mhz, to_mhz, from, to;
  std::size_t points = 10;
  std::string output = "sweep";
  std::string pipeline = "both";
  double calibration_mhz = 0.0;
  int jobs = 1;
};

int cmd_sweep(const ParamFlags& pf, const GridFlags& gf, const NoiseFlags& nf, const SweepFlags& sf) {
  SweepConfig cfg;
  const auto axis = parse_axis(sf.axis);
  if (!axis) throw UsageError("unknown axis '" + sf.axis + "'");
  cfg.axis = *axis;
  const bool frequency_axis = cfg.axis != SweepAxis::Od && cfg.axis != SweepAxis::MwPower;
  double lo = 0.0, hi = 0.0;
  if (frequency_axis) {
    if (!sf.from_mhz || !sf.to_mhz) throw UsageError("--from-mhz and --to-mhz are required for this axis");
    lo = mhz(*sf.from_mhz);
    hi = mhz(*sf.to_mhz);
  } else {
    if (!sf.from || !sf.to) throw UsageError("--from and --to are required for this axis");
    lo = *sf.from;
    hi = *sf.to;
  }
  if (sf.points < 1) throw UsageError("--points must be >= 1");
  for (std::size_t i = 0; i < sf.points; ++i)
    cfg.values.push_back(sf.points == 1 ? lo : lo + (hi - lo) * double(i) / double(sf.points - 1));

  cfg.base = pf.resolve();
  cfg.grid = gf.spec();
  cfg.noise = nf.model();
  cfg.extraction.pipeline = parse_pipeline(sf.pipeline);
  cfg.mw_calibration = mhz(sf.calibration_mhz);
  cfg.jobs = sf.jobs;
  if (cfg.axis == SweepAxis::MwPower && !(cfg.mw_calibration > 0.0))
    throw UsageError("--calibration-mhz is required for the mw-power axis");

  SweepReport report;
  try {
    report = run_sweep(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  write_json(to_json(report), sf.output + ".json");
  {
    std::ofstream csv(sf.output + ".csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + sf.output + ".csv");
    write_csv(report, csv);
  }

  std::printf("wrote %s.json and %s.csv\n", sf.output.c_str(), sf.output.c_str());
  std::printf("%5s %14s %10s %12s %12s %10s %10s\n", "index", "value", "regime", "df/MHz", "df'/MHz", "dev/%",
              "dev'/%");
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& pt = report.points[i];
    const double shown = frequency_axis ? to_mhz(pt.value) : pt.value;
    std::printf("%5zu %14.6g %10s %12s %12s %10s %10s%s\n", i, shown, std::string(to_string(pt.regime)).c_str(),
                show(pt.result.delta_f_hz, 1e-6).c_str(), show(pt.result.delta_f_prime_hz, 1e-6).c_str(),
                show(pt.result.deviation_pct).c_str(), show(pt.result.deviation_prime_pct).c_str(),
                pt.error.empty() ? "" : "  !");
  }
  for (std::size_t i = 0; i < report.points.size(); ++i)
    if (!report.points[i].error.empty())
      std::fprintf(stderr, "point %zu: %s\n", i, report.points[i].error.c_str());
  return kOk;
}

// ---------------------------------------------------------------- classify / validate

int cmd_classify(const ParamFlags& pf) {
  std::printf("%s\n", std::string(to_string(classify(pf.resolve()))).c_str());
  return kOk;
}

int cmd_validate() {
  bool ok = true;
  for (const auto& c : run_validation()) {
    std::printf("[%s] %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg EIA microwave electrometry toolkit"};
  app.require_subcommand(1);

  ParamFlags sim_params, fit_params, sweep_params, cls_params;
  GridFlags sim_grid, sweep_grid;
  NoiseFlags sim_noise, sweep_noise;

  auto* simulate = app.add_subcommand("simulate", "synthesize a transmission spectrum");
  std::string sim_output = "spectrum.csv";
  sim_params.bind(simulate);
  sim_grid.bind(simulate);
  sim_noise.bind(simulate);
  simulate->add_option("-o,--output", sim_output, "CSV path; metadata goes next to it as .json")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "extract the splitting from a spectrum CSV");
  std::string fit_input, fit_output = "fit.json", pipeline = "both";
  double dipole = DipoleTransition{}.dipole_moment;
  fit->add_option("input", fit_input, "spectrum CSV")->required();
  fit->add_option("-o,--output", fit_output, "result JSON")->capture_default_str();
  fit->add_option("--pipeline", pipeline, "local | global | both")
      ->check(CLI::IsMember({"local", "global", "both"}))
      ->capture_default_str();
  fit->add_option("--dipole-ea0", dipole, "MW transition dipole moment in e a0")->capture_default_str();
  std::uint64_t fit_seed = 0;
  fit->add_option("--seed", fit_seed, "accepted for symmetry; the fit is deterministic");
  fit_params.bind(fit);

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep through both routes");
  SweepFlags sf;
  sweep->add_option("--axis", sf.axis, "omega-mw | mw-power | od | omega-c | delta-c")->capture_default_str();
  sweep->add_option("--from-mhz", sf.from_mhz, "first value / 2pi (frequency axes)");
  sweep->add_option("--to-mhz", sf.to_mhz, "last value / 2pi (frequency axes)");
  sweep->add_option("--from", sf.from, "first value (od, or dBm for mw-power)");
  sweep->add_option("--to", sf.to, "last value (od, or dBm for mw-power)");
  sweep->add_option("--points", sf.points, "number of sweep points")->capture_default_str();
  sweep->add_option("--calibration-mhz", sf.calibration_mhz, "Omega_mw/2pi in MHz per sqrt(mW) (mw-power axis)");
  sweep->add_option("--pipeline", sf.pipeline, "local | global | both")
      ->check(CLI::IsMember({"local", "global", "both"}))
      ->capture_default_str();
  sweep->add_option("--jobs", sf.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("-o,--output", sf.output, "output prefix for .json and .csv")->capture_default_str();
  sweep_params.bind(sweep);
  sweep_grid.bind(sweep);
  sweep_noise.bind(sweep);

  auto* classify_cmd = app.add_subcommand("classify", "print the regime label of a parameter set");
  cls_params.bind(classify_cmd);

  auto* validate = app.add_subcommand("validate", "run the built-in oracle cross-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim_params, sim_grid, sim_noise, sim_output);
    if (*fit) return cmd_fit(fit_params, fit_input, fit_output, pipeline, dipole);
    if (*sweep) return cmd_sweep(sweep_params, sweep_grid, sweep_noise, sf);
    if (*classify_cmd) return cmd_classify(cls_params);
    if (*validate) return cmd_validate();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
