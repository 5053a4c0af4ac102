// Acceptance checks C1..C10. One PASS/FAIL line per criterion; the exit code
// is nonzero when any criterion that ran failed.
//
//   acceptance            run all
//   acceptance --only N   run criterion N

#include "oracles.hpp"
#include "rydmw/eia_effective.hpp"
#include "rydmw/errors.hpp"
#include "rydmw/fitting.hpp"
#include "rydmw/lindblad.hpp"
#include "rydmw/presets.hpp"
#include "rydmw/spectrum.hpp"
#include "rydmw/susceptibility.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace rydmw;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const GridSpec kGrid{-mhz(20.0), mhz(20.0), 2001};

// ---------------------------------------------------------------- C1

Outcome c1_pole_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  const std::vector<double> grid = GridSpec{-mhz(200.0), mhz(200.0), 201}.values();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const SystemParams p = oracle::random_params(rng);
    const PoleDecomposition dec = decompose(p);
    for (double d : grid) {
      const oracle::cplx direct = oracle::coherence_direct(p, d);
      worst = std::max(worst, std::abs(rho21_from_poles(p, dec, d) - direct) / std::abs(direct));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && t < 5.0, fmt("max rel err %.2e (<= 1e-9), %.3f s (< 5 s)", worst, t)};
}

// ---------------------------------------------------------------- C2

Outcome c2_lindblad() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u(rng)); };
  const std::vector<double> grid = GridSpec{-mhz(20.0), mhz(20.0), 21}.values();

  double worst = 0.0, worst_half = 0.0;
  for (int k = 0; k < 20; ++k) {
    SystemParams p;
    p.omega_c = log_uniform(mhz(1.0), mhz(20.0));
    p.omega_mw = log_uniform(mhz(1.0), mhz(20.0));
    p.gamma3 = log_uniform(khz(10.0), khz(200.0));
    p.gamma4 = log_uniform(khz(10.0), khz(200.0));
    p.delta_c = mhz(-20.0 + 40.0 * u(rng));
    p.delta_mw = mhz(-2.0 + 4.0 * u(rng));
    SystemParams half = p;
    p.omega_p = 1e-3 * p.natural_linewidth();
    half.omega_p = 0.5 * p.omega_p;
    for (double d : grid) {
      const cplx exact = rho21(p, d);
      worst = std::max(worst, std::abs(steady_state(p, d).probe_coherence() - exact) / std::abs(exact));
      const cplx exact_half = rho21(half, d);
      worst_half =
          std::max(worst_half, std::abs(steady_state(half, d).probe_coherence() - exact_half) / std::abs(exact_half));
    }
  }
  const double ratio = worst / worst_half;
  const double t = seconds_since(t0);
  return {worst <= 1e-3 && ratio >= 3.5 && ratio <= 4.5 && t < 10.0,
          fmt("max rel err %.2e (<= 1e-3), halving ratio %.3f (3.5..4.5), %.3f s (< 10 s)", worst, ratio, t)};
}

// ---------------------------------------------------------------- C3 / C8

SystemParams eia_at(double omega_mw_mhz) {
  SystemParams p = *preset("eia");
  p.omega_mw = mhz(omega_mw_mhz);
  return p;
}

Outcome c3_equivalence() {
  double worst = 0.0;
  std::string detail;
  for (double mw : {2.5, 5.0, 7.5, 10.0}) {
    const SystemParams p = eia_at(mw);
    const double dev = deviation(extract_ats(synthesize(p, kGrid)), p.omega_mw);
    worst = std::max(worst, std::abs(dev));
    detail += fmt("%g MHz: %+.3f%%  ", mw, dev);
  }
  return {worst < 1.0, detail + fmt("(max |dev| %.3f%% < 1%%)", worst)};
}

Outcome c8_consistency() {
  double worst = 0.0, worst_truth = 0.0;
  std::string detail;
  for (double mw : {2.5, 5.0, 7.5, 10.0}) {
    const SystemParams p = eia_at(mw);
    ExtractionConfig cfg;
    cfg.nominal = *preset("eia");
    const ExtractionResult r = extract(synthesize(p, kGrid), cfg);
    if (!r.deviation_pct || !r.deviation_prime_pct) return {false, fmt("%g MHz: a route failed", mw)};
    const double gap = std::abs(*r.deviation_pct - *r.deviation_prime_pct);
    const double gap_truth =
        std::abs(deviation(*r.delta_f_hz, p.omega_mw) - deviation(*r.delta_f_prime_hz, p.omega_mw));
    worst = std::max(worst, gap);
    worst_truth = std::max(worst_truth, gap_truth);
    detail += fmt("%g MHz: %.3f pp  ", mw, gap);
  }
  return {worst < 1.0 && worst_truth < 1.0,
          detail + fmt("(max %.3f pp; against the true Omega_mw %.3f pp; both < 1)", worst, worst_truth)};
}

// ---------------------------------------------------------------- C4

Outcome c4_breakdown() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"deit", "dats"}) {
    double worst = 0.0, at = 0.0;
    std::size_t failed = 0;
    for (double mw = 1.0; mw <= 10.0 + 1e-9; mw += 0.5) {
      SystemParams p = *preset(name);
      p.omega_mw = mhz(mw);
      try {
        const double dev = deviation(extract_ats(synthesize(p, kGrid)), p.omega_mw);
        if (std::abs(dev) > worst) {
          worst = std::abs(dev);
          at = mw;
        }
      } catch (const std::exception&) {
        ++failed;
      }
    }
    ok = ok && worst > 5.0;
    detail += fmt("%s: max |dev| %.2f%% at %g MHz (%zu points without two dips)  ", name, worst, at, failed);
  }
  return {ok, detail + "(each > 5%)"};
}

// ---------------------------------------------------------------- C5

Outcome c5_field() {
  const double e = field_from_splitting(250e3, 1926.0) * 1e4;  // uV/cm
  const double err = std::abs(e / 101.4 - 1.0);
  return {err <= 2e-3, fmt("%.4f uV/cm vs 101.4 (rel err %.2e <= 2e-3)", e, err)};
}

// ---------------------------------------------------------------- C6

Outcome c6_linewidth() {
  Eigen::MatrixXd X(18, 4);
  Eigen::VectorXd y(18);
  double worst = 0.0;
  int row = 0;
  for (double od : {25.0, 49.0, 100.0})
    for (double oc : {3.0, 6.0, 12.0})
      for (double dc : {100.0, 200.0}) {
        SystemParams p;
        p.od = od;
        p.omega_c = mhz(oc);
        p.delta_c = mhz(dc);
        p.gamma3 = p.gamma4 = khz(10.0);
        const double law = std::sqrt(od) * p.omega_c * p.omega_c / (8.0 * p.delta_c);
        const double shift = (p.omega_p * p.omega_p + p.omega_c * p.omega_c) / (4.0 * p.delta_c);
        const double span = std::abs(shift) + std::max(10.0 * law, mhz(1.0));
        const Spectrum s = synthesize(p, GridSpec{-span, span, 4001});
        const double w = eia_linewidth(s, p);
        worst = std::max(worst, std::abs(w / law - 1.0));
        X.row(row) << 1.0, std::log(od), std::log(p.omega_c), std::log(p.delta_c);
        y(row) = std::log(w);
        ++row;
      }
  const Eigen::Vector4d b = X.colPivHouseholderQr().solve(y);
  const bool exps = std::abs(b(1) / 0.5 - 1.0) <= 0.15 && std::abs(b(2) / 2.0 - 1.0) <= 0.15 &&
                    std::abs(b(3) / -1.0 - 1.0) <= 0.15;
  return {worst <= 0.25 && exps,
          fmt("max |FWHM/law - 1| %.3f (<= 0.25); exponents OD %.3f (0.5), Omega_c %.3f (2), Delta_c %.3f (-1), "
              "each +-15%%",
              worst, b(1), b(2), b(3))};
}

// ---------------------------------------------------------------- C7

Outcome c7_identifiability() {
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  double worst = 0.0;
  int unconverged = 0;
  for (int k = 0; k < 50; ++k) {
    SystemParams truth;
    truth.od = in(50.0, 120.0);
    truth.omega_c = mhz(in(4.0, 8.0));
    truth.omega_mw = mhz(in(2.0, 8.0));
    truth.delta_c = mhz(in(80.0, 150.0));
    truth.delta_mw = mhz(in(-0.3, 0.3));
    truth.gamma3 = khz(in(30.0, 100.0));
    truth.gamma4 = khz(in(30.0, 100.0));
    SystemParams nominal = truth;
    nominal.omega_c *= 1.1;
    const GlobalFit f = fit_global_auto(synthesize(truth, kGrid), nominal);
    if (!f.converged) ++unconverged;
    const SystemParams& g = f.params;
    for (auto [got, want] : {std::pair{g.od, truth.od}, {g.omega_c, truth.omega_c}, {g.delta_mw, truth.delta_mw},
                             {g.omega_mw, truth.omega_mw}, {g.gamma3, truth.gamma3}, {g.gamma4, truth.gamma4}})
      worst = std::max(worst, std::abs(got / want - 1.0));
  }

  const SystemParams p = eia_at(5.0);
  double worst_noisy = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GlobalFit f = fit_global_auto(synthesize(p, kGrid, NoiseModel{0.01, 0.0, seed}), *preset("eia"));
    worst_noisy = std::max(worst_noisy, std::abs(f.params.omega_mw / p.omega_mw - 1.0));
  }
  return {worst <= 1e-6 && worst_noisy <= 0.01,
          fmt("noise-free: max rel err %.2e over 50 sets (<= 1e-6, %d unconverged); 1%% noise: max Omega_mw err "
              "%.3f%% over 20 seeds (<= 1%%)",
              worst, unconverged, 100.0 * worst_noisy)};
}

// ---------------------------------------------------------------- C9

Outcome c9_anchors() {
  SystemParams two;
  two.omega_c = 0.0;
  two.omega_mw = 0.0;
  two.delta_c = mhz(3.0);
  two.od = 2.5;
  const double e_two = std::abs(transmit(two, two.delta_c) - std::exp(-two.od));

  std::mt19937_64 rng(9009);
  double e_s3 = 0.0, e_s2 = 0.0;
  for (int k = 0; k < 100; ++k) {
    const SystemParams p = oracle::random_params(rng);
    const auto s = decompose(p).residues;
    e_s3 = std::max(e_s3, std::abs(s[0] + s[1] + s[2] - 1.0));
  }
  for (double dc : {80.0, 100.0, -150.0})
    for (double mw : {2.0, 5.0, 9.0}) {
      SystemParams p = *preset("eia");
      p.delta_c = mhz(dc);
      p.omega_mw = mhz(mw);
      p.delta_mw = khz(150.0);
      const EiaPoles e = eia_poles(p, effective_params(p));
      e_s2 = std::max(e_s2, std::abs(e.s_plus + e.s_minus - 1.0));
    }

  double e_mirror = 0.0;
  for (const char* name : {"deit", "crossover", "dats"}) {
    SystemParams p = *preset(name);
    p.omega_mw = mhz(4.0);
    const Spectrum s = synthesize(p, kGrid);
    for (std::size_t i = 0; i < s.size(); ++i)
      e_mirror = std::max(e_mirror, std::abs(s.transmission[i] - s.transmission[s.size() - 1 - i]));
  }
  return {e_two <= 1e-10 && e_s3 <= 1e-9 && e_s2 <= 1e-9 && e_mirror <= 1e-10,
          fmt("two-level %.1e (<= 1e-10), |S1+S2+S3-1| %.1e, |S+ + S- - 1| %.1e (<= 1e-9), mirror %.1e (<= 1e-10)",
              e_two, e_s3, e_s2, e_mirror)};
}

// ---------------------------------------------------------------- C10

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c10_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("rydmw_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = RYDMW_CLI_PATH;
  auto run = [&](const std::string& args) {
    return std::system((cli + " " + args + " > /dev/null 2>&1").c_str()) == 0;
  };

  std::vector<std::string> files;
  std::vector<std::string> first;
  bool ran = true;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path d = dir / std::to_string(pass);
    fs::create_directories(d);
    const std::string csv = (d / "spec.csv").string();
    ran = ran && run("simulate --preset eia --omega-mw-mhz 5 --noise 0.01 --jitter-khz 20 --seed 42 -o " + csv);
    ran = ran && run("fit " + csv + " -o " + (d / "fit.json").string());
    ran = ran && run("sweep --preset eia --axis omega-mw --from-mhz 2 --to-mhz 8 --points 4 --noise 0.01 "
                     "--seed 42 --jobs 2 -o " +
                     (d / "sweep").string());
    std::vector<std::string> contents;
    for (const char* f : {"spec.csv", "spec.json", "fit.json", "sweep.json", "sweep.csv"}) {
      contents.push_back(slurp(d / f));
      if (pass == 0) files.emplace_back(f);
    }
    if (pass == 0) {
      first = contents;
    } else {
      for (std::size_t i = 0; i < contents.size(); ++i)
        if (contents[i] != first[i] || contents[i].empty()) {
          fs::remove_all(dir);
          return {false, files[i] + " differs between runs or is empty"};
        }
    }
  }
  fs::remove_all(dir);
  if (!ran) return {false, "a CLI invocation failed"};
  return {true, "spec.csv, spec.json, fit.json, sweep.json, sweep.csv byte-identical across two runs"};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {"pole decomposition identity", c1_pole_identity},
    {"Lindblad oracle equivalence", c2_lindblad},
    {"EIA splitting equals Omega_mw", c3_equivalence},
    {"EIT regimes deviate", c4_breakdown},
    {"field conversion", c5_field},
    {"EIA linewidth law", c6_linewidth},
    {"global fit identifiability", c7_identifiability},
    {"local vs global consistency", c8_consistency},
    {"anchors", c9_anchors},
    {"CLI determinism", c10_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]\n");
      return 2;
    }
  }
  if (only < 0 || only > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }

  bool all = true;
  for (int n = 1; n <= 10; ++n) {
    if (only && n != only) continue;
    Outcome o;
    try {
      o = kCriteria[n - 1].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("C%d %s: %s -- %s\n", n, o.passed ? "PASS" : "FAIL", kCriteria[n - 1].title, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
