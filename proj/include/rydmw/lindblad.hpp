#pragma once

// Full Lindblad steady state of the four-level ladder, used as ground truth for
// the weak-probe closed forms. Dense 16x16 solve, no weak-probe assumption.

#include "rydmw/params.hpp"
#include "rydmw/polynomial.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rydmw {

/// Population decay parts of the Rydberg dephasings: gamma3 = decay3/2 + gamma_d,
/// gamma4 = decay4/2 + gamma_d'. |3> decays to |2>, |4> decays to |1>.
/// The default puts everything into pure dephasing.
struct GammaSplit {
  double decay3 = 0.0;
  double decay4 = 0.0;
};

struct DensityMatrix {
  Eigen::Matrix4cd rho;
  double residual = 0.0;  // ||L rho|| / ||L||

  /// <1|rho|2>; equals the closed-form rho21 in the weak-probe limit.
  cplx probe_coherence() const { return rho(0, 1); }
};

/// 16x16 Liouvillian acting on row-major vec(rho), for two-photon detuning delta.
Eigen::Matrix<cplx, 16, 16> liouvillian(const SystemParams& p, double delta, const GammaSplit& split = {});

/// Throws SteadyStateError when the steady state is not unique or the solve is unreliable.
DensityMatrix steady_state(const SystemParams& p, double delta, const GammaSplit& split = {});

struct WeakProbeEstimate {
  cplx value;                    // extrapolated rho21 / Omega_p as Omega_p -> 0
  double error_estimate = 0.0;   // |last two Richardson levels|
  std::vector<cplx> samples;     // rho21 / Omega_p at each probe scale
  std::vector<double> raw_errors;  // |sample - value|
  bool monotone = true;          // successive sample differences shrink
};

/// probe_scales are Omega_p / Gamma, strictly decreasing, at least three.
/// Richardson extrapolation in Omega_p^2.
WeakProbeEstimate weak_probe_extrapolation(const SystemParams& p, double delta,
                                           std::span<const double> probe_scales,
                                           const GammaSplit& split = {});

}  // namespace rydmw
