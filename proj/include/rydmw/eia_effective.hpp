#pragma once

// Three-level model after adiabatic elimination of the far-detuned |2>.

#include "rydmw/params.hpp"
#include "rydmw/polynomial.hpp"

namespace rydmw {

struct EffectiveParams {
  double omega_eff = 0.0;  // Omega_p Omega_c / (2 Delta_c)
  double delta_ac = 0.0;   // (Omega_p^2 + Omega_c^2) / (4 Delta_c)
};

/// Validity gates are asymptotic conditions; Override skips them but keeps hard errors.
enum class Gate { Enforce, Override };

/// Requires |Delta_c| >= 10 max(Omega_c, Gamma) unless gate == Override.
/// Delta_c == 0 is always rejected.
EffectiveParams effective_params(const SystemParams& p, Gate gate = Gate::Enforce);

/// rho31 = (Omega_eff/2) d4 / (d4 (d3 + Delta_AC) - Omega_mw^2/4).
cplx rho31(const SystemParams& p, const EffectiveParams& eff, double delta);

struct EiaPoles {
  cplx plus, minus;            // delta_+, delta_-
  cplx s_plus, s_minus;        // strengths, s_plus + s_minus = 1
};

/// Roots of the quadratic denominator of rho31 and their strengths.
/// With Delta_mw = 0 the poles sit symmetrically about -Delta_AC + i(gamma3+gamma4)/2.
EiaPoles eia_poles(const SystemParams& p, const EffectiveParams& eff);

/// Two equal-width Lorentzians at +-Omega_mw/2 with half-width (gamma3+gamma4)/2.
/// Gate: Omega_mw > 10 max(|gamma3 - gamma4|, |Delta_AC|).
cplx double_lorentzian(const SystemParams& p, const EffectiveParams& eff, double delta,
                       Gate gate = Gate::Enforce);

}  // namespace rydmw
