#include "rydmw/validation.hpp"

#include "rydmw/eia_effective.hpp"
#include "rydmw/fitting.hpp"
#include "rydmw/kernels.hpp"
#include "rydmw/lindblad.hpp"
#include "rydmw/presets.hpp"
#include "rydmw/spectrum.hpp"
#include "rydmw/susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

namespace rydmw {

namespace {

std::string fmt(const char* label, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s = %.3g", label, v);
  return buf;
}

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_rate(std::log(khz(10.0)), std::log(mhz(50.0)));
  std::uniform_real_distribution<double> detuning(-mhz(200.0), mhz(200.0));
  auto draw = [&] { return std::exp(log_rate(rng)); };
  SystemParams p;
  p.omega_p = draw();
  p.omega_c = draw();
  p.omega_mw = draw();
  p.gamma2 = draw();
  p.gamma3 = draw();
  p.gamma4 = draw();
  p.delta_c = detuning(rng);
  p.delta_mw = detuning(rng);
  p.od = 1.0;
  return p;
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

CheckResult pole_identity() {
  std::mt19937_64 rng(20240601);
  double worst = 0.0, worst_sum = 0.0;
  for (int k = 0; k < 20; ++k) {
    const SystemParams p = random_params(rng);
    const PoleDecomposition dec = decompose(p);
    worst_sum = std::max(worst_sum, std::abs(dec.residues[0] + dec.residues[1] + dec.residues[2] - 1.0));
    for (int i = 0; i <= 50; ++i) {
      const double delta = -mhz(100.0) + mhz(4.0) * i;
      const cplx direct = normalized_coherence(p, delta);
      const cplx poles = rho21_from_poles(p, dec, delta) / (0.5 * p.omega_p);
      worst = std::max(worst, std::abs(poles - direct) / std::abs(direct));
    }
  }
  return {"pole decomposition matches direct form", worst <= 1e-9 && worst_sum <= 1e-9,
          fmt("max rel err", worst) + ", " + fmt("max |sum S - 1|", worst_sum)};
}

CheckResult eia_strengths() {
  SystemParams p;
  p.delta_c = mhz(100.0);
  p.omega_mw = mhz(5.0);
  p.delta_mw = mhz(0.2);
  p.gamma4 = khz(80.0);
  const EiaPoles e = eia_poles(p, effective_params(p));
  const double err = std::abs(e.s_plus + e.s_minus - 1.0);
  return {"EIA strengths sum to one", err <= 1e-9, fmt("|S+ + S- - 1|", err)};
}

CheckResult two_level() {
  SystemParams p;
  p.omega_c = 0.0;
  p.omega_mw = 0.0;
  p.delta_c = mhz(3.0);
  p.od = 2.5;
  const double err = std::abs(transmit(p, p.delta_c) - std::exp(-p.od));
  return {"two-level resonant transmission is exp(-OD)", err <= 1e-10, fmt("abs err", err)};
}

CheckResult mirror_symmetry() {
  SystemParams p = *preset("crossover");
  p.omega_mw = mhz(4.0);
  const Spectrum s = synthesize(p, GridSpec{-mhz(20.0), mhz(20.0), 801});
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    worst = std::max(worst, std::abs(s.transmission[i] - s.transmission[s.size() - 1 - i]));
  return {"symmetric configuration gives a mirror-symmetric spectrum", worst <= 1e-10, fmt("max asym", worst)};
}

CheckResult lindblad_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    SystemParams p;
    p.omega_c = mhz(1.0 + 10.0 * u(rng));
    p.omega_mw = mhz(1.0 + 8.0 * u(rng));
    p.delta_c = mhz(-20.0 + 40.0 * u(rng));
    p.delta_mw = mhz(-2.0 + 4.0 * u(rng));
    p.omega_p = 1e-3 * p.natural_linewidth();
    for (int i = 0; i < 5; ++i) {
      const double delta = mhz(-10.0 + 5.0 * i);
      const cplx exact = rho21(p, delta);
      const cplx full = steady_state(p, delta).probe_coherence();
      worst = std::max(worst, std::abs(full - exact) / std::abs(exact));
    }
  }
  return {"Lindblad steady state agrees with the closed form", worst <= 1e-3, fmt("max rel err", worst)};
}

CheckResult kernels_agree() {
  SystemParams p = *preset("eia");
  p.omega_mw = mhz(5.0);
  const std::vector<double> grid = GridSpec{-mhz(20.0), mhz(20.0), 4001}.values();
  const NoiseModel noise{0.01, khz(20.0), 99};
  std::vector<double> a(grid.size()), b(grid.size());
  kernels::transmission(p, grid, a, &noise);
  kernels::transmission_serial(p, grid, b, &noise);
  return {"parallel and serial kernels are bit-identical", a == b, a == b ? "identical" : "differ"};
}

CheckResult round_trip() {
  SystemParams p = *preset("eia");
  p.omega_mw = mhz(5.0);
  const Spectrum s = synthesize(p, GridSpec{-mhz(20.0), mhz(20.0), 2001});
  const double dev = deviation(extract_ats(s), p.omega_mw);
  return {"EIA splitting equals Omega_mw", std::abs(dev) < 1.0, fmt("deviation %", dev)};
}

}  // namespace

std::vector<CheckResult> run_validation() {
  return {
      guarded("pole decomposition matches direct form", pole_identity),
      guarded("EIA strengths sum to one", eia_strengths),
      guarded("two-level resonant transmission is exp(-OD)", two_level),
      guarded("symmetric configuration gives a mirror-symmetric spectrum", mirror_symmetry),
      guarded("Lindblad steady state agrees with the closed form", lindblad_oracle),
      guarded("parallel and serial kernels are bit-identical", kernels_agree),
      guarded("EIA splitting equals Omega_mw", round_trip),
  };
}

}  // namespace rydmw
