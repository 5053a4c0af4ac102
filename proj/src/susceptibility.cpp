#include "rydmw/susceptibility.hpp"

#include "rydmw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydmw {

ResponseCoefficients response_coefficients(const SystemParams& p) {
  // d2 = delta - a, d3 = delta - b, d4 = delta - c
  const cplx a{p.delta_c, p.gamma2};
  const cplx b{0.0, p.gamma3};
  const cplx c{p.delta_mw, p.gamma4};
  const double mw2 = 0.25 * p.omega_mw * p.omega_mw;
  const double c2q = 0.25 * p.omega_c * p.omega_c;

  ResponseCoefficients k;
  k.n1 = -(b + c);
  k.n0 = b * c - mw2;
  k.c2 = -(a + b + c);
  k.c1 = a * b + a * c + b * c - mw2 - c2q;
  k.c0 = -a * b * c + a * mw2 + c * c2q;
  return k;
}

cplx normalized_coherence(const SystemParams& p, double delta) {
  const ComplexDetunings d(p, delta);
  const double mw2 = 0.25 * p.omega_mw * p.omega_mw;
  const double c2q = 0.25 * p.omega_c * p.omega_c;
  const cplx d34 = d.d3() * d.d4();
  const cplx den = d.d2() * d34 - d.d2() * mw2 - d.d4() * c2q;
  const double scale = std::abs(d.d2() * d34) + std::abs(d.d2()) * mw2 + std::abs(d.d4()) * c2q;
  if (!(std::abs(den) > 64.0 * std::numeric_limits<double>::epsilon() * scale))
    throw DegenerateError("rho21 denominator vanishes at this detuning");
  return (d34 - mw2) / den;
}

cplx rho21(const SystemParams& p, double delta) {
  return 0.5 * p.omega_p * normalized_coherence(p, delta);
}

std::array<cplx, 3> solve_poles(const SystemParams& p) {
  const ResponseCoefficients k = response_coefficients(p);
  auto roots = cubic_roots(k.c2, k.c1, k.c0);

  double scale = 0.0;
  for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
  const double tie = 1e-12 * scale;
  auto before = [tie](const cplx& x, const cplx& y) {
    if (std::abs(x.real() - y.real()) > tie) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  // Three elements: explicit insertion sort keeps the tolerance comparator safe.
  for (int i = 1; i < 3; ++i)
    for (int j = i; j > 0 && before(roots[j], roots[j - 1]); --j) std::swap(roots[j], roots[j - 1]);
  return roots;
}

std::array<cplx, 3> residues(const SystemParams& p, const std::array<cplx, 3>& poles) {
  double scale = 0.0;
  for (const cplx& r : poles) scale = std::max(scale, std::abs(r));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!(std::abs(poles[i] - poles[j]) > kDegeneratePoleThreshold * scale))
        throw DegenerateError("near-degenerate poles; use direct rho21 evaluation");

  const ResponseCoefficients k = response_coefficients(p);
  std::array<cplx, 3> s;
  for (int i = 0; i < 3; ++i) {
    const cplx z = poles[i];
    cplx den{1.0, 0.0};
    for (int j = 0; j < 3; ++j)
      if (j != i) den *= z - poles[j];
    s[i] = ((z + k.n1) * z + k.n0) / den;
  }
  return s;
}

PoleDecomposition decompose(const SystemParams& p) {
  PoleDecomposition dec;
  dec.poles = solve_poles(p);
  dec.residues = residues(p, dec.poles);
  return dec;
}

cplx rho21_from_poles(const SystemParams& p, const PoleDecomposition& dec, double delta) {
  cplx sum{};
  for (int i = 0; i < 3; ++i) sum += dec.residues[i] / (delta - dec.poles[i]);
  return 0.5 * p.omega_p * sum;
}

}  // namespace rydmw
