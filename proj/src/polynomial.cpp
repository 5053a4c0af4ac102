#include "rydmw/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydmw {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double cubic_scale_bound(cplx a2, cplx a1, cplx a0, cplx z) {
  const double r = std::abs(z);
  return ((r + std::abs(a2)) * r + std::abs(a1)) * r + std::abs(a0);
}

cplx laguerre_root(cplx a2, cplx a1, cplx a0) {
  constexpr double n = 3.0;
  cplx x{0.0, 0.0};
  for (int it = 0; it < 200; ++it) {
    const cplx p = eval_monic_cubic(a2, a1, a0, x);
    if (std::abs(p) <= 4.0 * kEps * cubic_scale_bound(a2, a1, a0, x)) break;
    const cplx dp = (3.0 * x + 2.0 * a2) * x + a1;
    const cplx d2p = 6.0 * x + 2.0 * a2;
    const cplx g = dp / p;
    const cplx h = g * g - d2p / p;
    const cplx sq = std::sqrt((n - 1.0) * (n * h - g * g));
    const cplx den = std::abs(g + sq) >= std::abs(g - sq) ? g + sq : g - sq;
    // Fractional kick breaks the rare limit cycle.
    const cplx step = std::abs(den) > 0.0 ? n / den : std::polar(1.0 + std::abs(x), double(it));
    const cplx next = (it % 20 == 19) ? x - 0.5 * step : x - step;
    if (std::abs(next - x) <= kEps * std::abs(next)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

cplx newton_polish(cplx a2, cplx a1, cplx a0, cplx z) {
  double best = std::abs(eval_monic_cubic(a2, a1, a0, z));
  for (int it = 0; it < 6 && best > 0.0; ++it) {
    const cplx dp = (3.0 * z + 2.0 * a2) * z + a1;
    if (dp == cplx{}) break;
    const cplx next = z - eval_monic_cubic(a2, a1, a0, z) / dp;
    const double r = std::abs(eval_monic_cubic(a2, a1, a0, next));
    if (!(r < best)) break;
    best = r;
    z = next;
  }
  return z;
}

}  // namespace

std::array<cplx, 2> quadratic_roots(cplx b, cplx c) {
  cplx disc = std::sqrt(b * b - 4.0 * c);
  if (std::real(std::conj(b) * disc) < 0.0) disc = -disc;
  const cplx q = -0.5 * (b + disc);
  if (q == cplx{}) return {cplx{}, cplx{}};
  return {q, c / q};
}

std::array<cplx, 3> cubic_roots(cplx c2, cplx c1, cplx c0) {
  const double s = std::max({std::abs(c2), std::sqrt(std::abs(c1)), std::cbrt(std::abs(c0))});
  if (s == 0.0) return {cplx{}, cplx{}, cplx{}};

  const cplx a2 = c2 / s;
  const cplx a1 = c1 / (s * s);
  const cplx a0 = c0 / (s * s * s);

  const cplx r0 = laguerre_root(a2, a1, a0);
  const cplx b = a2 + r0;
  const cplx c = a1 + r0 * b;
  const auto [r1, r2] = quadratic_roots(b, c);

  return {s * newton_polish(a2, a1, a0, r0), s * newton_polish(a2, a1, a0, r1),
          s * newton_polish(a2, a1, a0, r2)};
}

}  // namespace rydmw
