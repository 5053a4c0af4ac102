#pragma once

// Grid kernels. Each has an OpenMP version and a serial reference that must
// produce bit-identical output; tests and the benchmark compare the two.

#include "rydmw/lindblad.hpp"
#include "rydmw/noise.hpp"
#include "rydmw/params.hpp"

#include <span>

namespace rydmw::kernels {

/// P_t/P_0 = exp(-OD (Gamma/Omega_p) Im rho21(delta)) on every grid point.
/// With noise, the jitter shifts the evaluation point and the additive part is
/// clamped to [0, 1 + 5 sigma].
void transmission(const SystemParams& p, std::span<const double> grid, std::span<double> out,
                  const NoiseModel* noise = nullptr);
void transmission_serial(const SystemParams& p, std::span<const double> grid, std::span<double> out,
                         const NoiseModel* noise = nullptr);

/// <1|rho|2> of the full steady state on every grid point.
void steady_state_coherence(const SystemParams& p, std::span<const double> grid, std::span<cplx> out,
                            const GammaSplit& split = {});
void steady_state_coherence_serial(const SystemParams& p, std::span<const double> grid,
                                   std::span<cplx> out, const GammaSplit& split = {});

}  // namespace rydmw::kernels
