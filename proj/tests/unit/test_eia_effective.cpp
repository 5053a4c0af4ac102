#include "oracles.hpp"
#include "rydmw/eia_effective.hpp"
#include "rydmw/errors.hpp"
#include "rydmw/susceptibility.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace rydmw;

namespace {

SystemParams eia_point() {
  SystemParams p;
  p.omega_p = mhz(0.4);
  p.omega_c = mhz(6.0);
  p.delta_c = mhz(100.0);
  return p;
}

// delta of the Im maximum of f on [lo, hi] by golden-section search.
template <class F>
double argmax_im(F&& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  for (int k = 0; k < 200; ++k) {
    const double x1 = b - g * (b - a), x2 = a + g * (b - a);
    if (f(x1).imag() > f(x2).imag())
      b = x2;
    else
      a = x1;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("effective couplings") {
  const EffectiveParams e = effective_params(eia_point());
  CHECK(angular_to_hz(e.omega_eff) == doctest::Approx(12e3).epsilon(1e-12));
  CHECK(angular_to_hz(e.delta_ac) == doctest::Approx(90.4e3).epsilon(1e-12));

  SystemParams p = eia_point();
  p.omega_p = 0.0;
  const EffectiveParams z = effective_params(p);
  CHECK(z.omega_eff == 0.0);
  CHECK(z.delta_ac == doctest::Approx(p.omega_c * p.omega_c / (4.0 * p.delta_c)));

  SystemParams twice = eia_point();
  twice.delta_c *= 2.0;
  const EffectiveParams h = effective_params(twice);
  CHECK(h.omega_eff == doctest::Approx(e.omega_eff / 2.0).epsilon(1e-15));
  CHECK(h.delta_ac == doctest::Approx(e.delta_ac / 2.0).epsilon(1e-15));

  SystemParams resonant = eia_point();
  resonant.delta_c = 0.0;
  CHECK_THROWS_AS(effective_params(resonant), std::invalid_argument);
  CHECK_THROWS_AS(effective_params(resonant, Gate::Override), std::invalid_argument);

  SystemParams near = eia_point();
  near.delta_c = mhz(20.0);
  CHECK_THROWS_AS(effective_params(near), std::invalid_argument);
  CHECK_NOTHROW(effective_params(near, Gate::Override));
}

TEST_CASE("rho31 lineshapes") {
  SystemParams p = eia_point();
  const EffectiveParams e = effective_params(p);

  SUBCASE("single Lorentzian at -Delta_AC without MW") {
    const cplx i(0.0, 1.0);
    for (double d : {-mhz(1.0), 0.0, mhz(0.3)})
      CHECK(std::abs(rho31(p, e, d) - 0.5 * e.omega_eff / (d - i * p.gamma3 + e.delta_ac)) < 1e-12 * e.omega_eff / p.gamma3);
    const double peak = argmax_im([&](double d) { return rho31(p, e, d); }, -mhz(1.0), mhz(1.0));
    CHECK(peak == doctest::Approx(-e.delta_ac).epsilon(1e-6));
  }
  SUBCASE("two peaks near +-Omega_mw/2") {
    p.omega_mw = mhz(5.0);
    const double hi = argmax_im([&](double d) { return rho31(p, e, d); }, 0.0, mhz(5.0));
    const double lo = argmax_im([&](double d) { return rho31(p, e, d); }, -mhz(5.0), 0.0);
    CHECK(hi == doctest::Approx(mhz(2.5)).epsilon(0.05));
    CHECK(lo == doctest::Approx(-mhz(2.5)).epsilon(0.05));
  }
  SUBCASE("passive") {
    p.omega_mw = mhz(2.0);
    for (int i = -100; i <= 100; ++i) CHECK(rho31(p, e, mhz(0.05 * i)).imag() >= 0.0);
  }
  SUBCASE("tracks the full four-level lineshape near two-photon resonance") {
    // Elimination drops the one-photon broadening gamma2 Omega_c^2 / (4 Delta_c^2)
    // of |3>, so the comparison needs Delta_c well beyond the gate.
    p.delta_c = mhz(300.0);
    p.omega_mw = mhz(2.0);
    const EffectiveParams far = effective_params(p);
    std::vector<double> a, b;
    for (int i = -200; i <= 200; ++i) {
      const double d = p.omega_mw * i / 200.0;
      // Subtract the bare one-photon line (Omega_p/2)/d2 to isolate the two-photon part.
      const cplx d2(d - p.delta_c, -p.gamma2);
      a.push_back((rho21(p, d) - 0.5 * p.omega_p / d2).imag());
      b.push_back(rho31(p, far, d).imag());
    }
    double ab = 0.0, bb = 0.0, amax = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      ab += a[k] * b[k];
      bb += b[k] * b[k];
      amax = std::max(amax, a[k]);
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - ab / bb * b[k]) / amax);
    CHECK(worst <= 0.02);
  }
}

TEST_CASE("two-pole form") {
  SUBCASE("uncoupled limit") {
    SystemParams p = eia_point();
    p.omega_c = 0.0;
    p.omega_p = 1e-9;
    p.gamma4 = khz(80.0);
    const EffectiveParams e{0.0, 0.0};
    const EiaPoles r = eia_poles(p, e);
    const std::vector<cplx> expect{{0.0, p.gamma3}, {0.0, p.gamma4}};
    CHECK(oracle::set_distance({r.plus, r.minus}, expect, p.gamma4) < 1e-12);
  }
  SUBCASE("symmetric limit") {
    SystemParams p = eia_point();
    p.omega_mw = mhz(10.0);
    p.gamma3 = p.gamma4 = mhz(0.1);
    const EiaPoles r = eia_poles(p, EffectiveParams{0.0, 0.0});
    CHECK(r.plus.real() == doctest::Approx(mhz(5.0)).epsilon(1e-15));
    CHECK(r.minus.real() == doctest::Approx(-mhz(5.0)).epsilon(1e-15));
    CHECK(std::abs(r.s_plus - 0.5) < 1e-15);
  }
  SUBCASE("quadratic oracle, strengths, trace identity") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      SystemParams p = eia_point();
      p.omega_c = mhz(1.0 + 9.0 * u(rng));
      p.delta_c = mhz(100.0 + 200.0 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
      p.omega_mw = mhz(20.0 * u(rng));
      p.delta_mw = mhz(-1.0 + 2.0 * u(rng));
      p.gamma3 = khz(10.0 + 300.0 * u(rng));
      p.gamma4 = khz(10.0 + 300.0 * u(rng));
      const EffectiveParams e = effective_params(p);
      const EiaPoles r = eia_poles(p, e);
      // d4 (d3 + Delta_AC) - Omega_mw^2/4 expanded in delta
      const cplx b(-e.delta_ac, p.gamma3), c(p.delta_mw, p.gamma4);
      const auto o = oracle::companion_roots({-(b + c), b * c - 0.25 * p.omega_mw * p.omega_mw});
      const double scale = std::max(std::abs(o[0]), std::abs(o[1]));
      CHECK(oracle::set_distance({r.plus, r.minus}, o, scale) < 1e-10);
      CHECK(std::abs(r.s_plus + r.s_minus - 1.0) < 1e-12);
      if (p.delta_mw == 0.0)
        CHECK(std::abs(r.plus + r.minus - cplx(-e.delta_ac, p.gamma3 + p.gamma4)) < 1e-12 * scale);
      CHECK(std::abs(r.plus + r.minus - cplx(p.delta_mw - e.delta_ac, p.gamma3 + p.gamma4)) < 1e-12 * scale);
      // partial fractions reproduce rho31
      for (double d : {-mhz(3.0), 0.0, mhz(1.1)}) {
        const cplx pf = 0.5 * e.omega_eff * (r.s_plus / (d - r.plus) + r.s_minus / (d - r.minus));
        CHECK(std::abs(pf - rho31(p, e, d)) < 1e-10 * std::abs(rho31(p, e, d)));
      }
    }
  }
  SUBCASE("relative splitting error is second order in the width / Omega_mw") {
    SystemParams p = eia_point();
    p.gamma3 = khz(50.0);
    p.gamma4 = khz(150.0);
    const EffectiveParams e = effective_params(p);
    auto err = [&](double omega_mw) {
      p.omega_mw = omega_mw;
      const auto f = [&](double d) { return rho31(p, e, d); };
      const double hi = argmax_im(f, 0.0, omega_mw), lo = argmax_im(f, -omega_mw, 0.0);
      return std::abs((hi - lo) - omega_mw) / omega_mw;
    };
    const double ratio = err(mhz(2.0)) / err(mhz(4.0));
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("double Lorentzian limit") {
  SystemParams p = eia_point();
  p.omega_mw = mhz(5.0);
  p.gamma3 = p.gamma4 = mhz(0.1);
  const EffectiveParams e = effective_params(p);

  const auto dl = [&](double d) { return double_lorentzian(p, e, d); };
  const double hi = argmax_im(dl, 0.0, mhz(5.0)), lo = argmax_im(dl, -mhz(5.0), 0.0);
  CHECK((hi - lo) == doctest::Approx(p.omega_mw).epsilon(1e-6));

  // half width = (gamma3 + gamma4)/2 on an isolated line
  const double peak = dl(hi).imag();
  const double at_hw = dl(hi + p.gamma3).imag();
  CHECK(at_hw / peak == doctest::Approx(0.5).epsilon(2e-3));

  // peak heights agree with rho31 at each form's own line centers
  const auto r = [&](double d) { return rho31(p, e, d); };
  const double r_hi = argmax_im(r, 0.0, mhz(5.0)), r_lo = argmax_im(r, -mhz(5.0), 0.0);
  CHECK(std::abs(dl(hi).imag() / r(r_hi).imag() - 1.0) <= 0.03);
  CHECK(std::abs(dl(lo).imag() / r(r_lo).imag() - 1.0) <= 0.03);

  SystemParams small = p;
  small.omega_mw = 5.0 * e.delta_ac;
  CHECK_THROWS_AS(double_lorentzian(small, e, 0.0), std::invalid_argument);
  CHECK_NOTHROW(double_lorentzian(small, e, 0.0, Gate::Override));
}
