#include "rydmw/eia_effective.hpp"

#include "rydmw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rydmw {

EffectiveParams effective_params(const SystemParams& p, Gate gate) {
  p.validate();
  if (p.delta_c == 0.0) throw std::invalid_argument("adiabatic elimination needs Delta_c != 0");
  if (gate == Gate::Enforce &&
      std::abs(p.delta_c) < 10.0 * std::max(p.omega_c, p.natural_linewidth()))
    throw std::invalid_argument("|Delta_c| < 10 max(Omega_c, Gamma): outside the EIA regime");

  EffectiveParams eff;
  eff.omega_eff = p.omega_p * p.omega_c / (2.0 * p.delta_c);
  eff.delta_ac = (p.omega_p * p.omega_p + p.omega_c * p.omega_c) / (4.0 * p.delta_c);
  return eff;
}

cplx rho31(const SystemParams& p, const EffectiveParams& eff, double delta) {
  const cplx d3{delta, -p.gamma3};
  const cplx d4{delta - p.delta_mw, -p.gamma4};
  const double mw2 = 0.25 * p.omega_mw * p.omega_mw;
  const cplx lhs = d4 * (d3 + eff.delta_ac);
  const cplx den = lhs - mw2;
  if (!(std::abs(den) > 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(lhs) + mw2)))
    throw DegenerateError("rho31 denominator vanishes at this detuning");
  return 0.5 * eff.omega_eff * d4 / den;
}

EiaPoles eia_poles(const SystemParams& p, const EffectiveParams& eff) {
  // Denominator (delta - c)(delta - b) - Omega_mw^2/4, b = i gamma3 - Delta_AC, c = Delta_mw + i gamma4.
  const cplx b{-eff.delta_ac, p.gamma3};
  const cplx c{p.delta_mw, p.gamma4};
  const cplx root = std::sqrt((c - b) * (c - b) + p.omega_mw * p.omega_mw);

  EiaPoles out;
  out.plus = 0.5 * (b + c + root);
  out.minus = 0.5 * (b + c - root);
  const cplx split = out.plus - out.minus;
  if (split == cplx{}) throw DegenerateError("EIA poles coincide");
  out.s_plus = (out.plus - c) / split;
  out.s_minus = -(out.minus - c) / split;
  return out;
}

cplx double_lorentzian(const SystemParams& p, const EffectiveParams& eff, double delta, Gate gate) {
  if (gate == Gate::Enforce &&
      !(p.omega_mw > 10.0 * std::max(std::abs(p.gamma3 - p.gamma4), std::abs(eff.delta_ac))))
    throw std::invalid_argument("Omega_mw too small for the double-Lorentzian limit");
  const double hw = 0.5 * (p.gamma3 + p.gamma4);
  const double half = 0.5 * p.omega_mw;
  return 0.25 * eff.omega_eff * (1.0 / cplx{delta + half, -hw} + 1.0 / cplx{delta - half, -hw});
}

}  // namespace rydmw
