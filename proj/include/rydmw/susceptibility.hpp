#pragma once

// Weak-probe response of the four-level ladder |1>-|2>-|3>-|4>.
//
//   rho21(delta) = (Omega_p/2) (d3 d4 - Omega_mw^2/4)
//                  / (d2 d3 d4 - d2 Omega_mw^2/4 - d4 Omega_c^2/4)
//
// with d2 = delta - Delta_c - i gamma2, d3 = delta - i gamma3,
// d4 = delta - Delta_mw - i gamma4. The denominator is a monic cubic in delta,
// so the response splits into three resonances sum_i S_i / (delta - delta_i).

#include "rydmw/params.hpp"
#include "rydmw/polynomial.hpp"

#include <array>

namespace rydmw {

class ComplexDetunings {
 public:
  ComplexDetunings(const SystemParams& p, double delta)
      : d2_(delta - p.delta_c, -p.gamma2), d3_(delta, -p.gamma3), d4_(delta - p.delta_mw, -p.gamma4) {}

  cplx d2() const { return d2_; }
  cplx d3() const { return d3_; }
  cplx d4() const { return d4_; }

 private:
  cplx d2_, d3_, d4_;
};

/// Monic polynomial coefficients in delta. numerator: delta^2 + n1 delta + n0,
/// denominator: delta^3 + c2 delta^2 + c1 delta + c0.
struct ResponseCoefficients {
  cplx n1, n0;
  cplx c2, c1, c0;
};

ResponseCoefficients response_coefficients(const SystemParams& p);

/// rho21 / (Omega_p / 2); independent of Omega_p in the weak-probe limit.
/// Throws DegenerateError when the denominator cancels to roundoff.
cplx normalized_coherence(const SystemParams& p, double delta);

/// Probe coherence rho21(delta), closed form.
cplx rho21(const SystemParams& p, double delta);

struct PoleDecomposition {
  std::array<cplx, 3> poles;     // ascending real part, then imaginary part
  std::array<cplx, 3> residues;  // S_i, sum to 1
};

/// Relative separation below which two poles are treated as degenerate.
inline constexpr double kDegeneratePoleThreshold = 1e-10;

/// Three roots of the cubic denominator, ordered by (Re, Im).
std::array<cplx, 3> solve_poles(const SystemParams& p);

/// Partial-fraction strengths for the given poles. Throws DegenerateError if
/// two poles are closer than kDegeneratePoleThreshold * max |delta_i|.
std::array<cplx, 3> residues(const SystemParams& p, const std::array<cplx, 3>& poles);

PoleDecomposition decompose(const SystemParams& p);

/// (Omega_p/2) sum_i S_i / (delta - delta_i).
cplx rho21_from_poles(const SystemParams& p, const PoleDecomposition& dec, double delta);

}  // namespace rydmw
