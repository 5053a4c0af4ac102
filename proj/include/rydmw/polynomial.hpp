#pragma once

// Root finding for low-order monic complex polynomials.

#include <array>
#include <complex>

namespace rydmw {

using cplx = std::complex<double>;

/// Roots of z^2 + b z + c, computed without catastrophic cancellation.
std::array<cplx, 2> quadratic_roots(cplx b, cplx c);

/// Roots of z^3 + c2 z^2 + c1 z + c0.
///
/// Laguerre iteration on a rescaled copy of the polynomial finds one root, the
/// remaining quadratic is deflated and solved in closed form, and every root is
/// polished by Newton steps against the original cubic. No cube roots are taken,
/// so there is no branch ambiguity.
std::array<cplx, 3> cubic_roots(cplx c2, cplx c1, cplx c0);

/// Evaluates z^3 + c2 z^2 + c1 z + c0 with Horner's rule.
inline cplx eval_monic_cubic(cplx c2, cplx c1, cplx c0, cplx z) {
  return ((z + c2) * z + c1) * z + c0;
}

}  // namespace rydmw
