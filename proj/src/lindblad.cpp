#include "rydmw/lindblad.hpp"

#include "rydmw/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace rydmw {

namespace {

using Mat4 = Eigen::Matrix4cd;
using Mat16 = Eigen::Matrix<cplx, 16, 16>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

// Row-major vectorization: vec(A X B) = kron(A, B^T) vec(X).
Mat16 kron(const Mat4& a, const Mat4& b) {
  Mat16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

void add_dissipator(Mat16& l, const Mat4& c) {
  const Mat4 id = Mat4::Identity();
  const Mat4 cdc = c.adjoint() * c;
  l += kron(c, c.conjugate()) - 0.5 * kron(cdc, id) - 0.5 * kron(id, cdc.transpose());
}

Mat4 transition(int i, int j, double amplitude) {
  Mat4 m = Mat4::Zero();
  m(i, j) = amplitude;
  return m;
}

}  // namespace

Mat16 liouvillian(const SystemParams& p, double delta, const GammaSplit& split) {
  p.validate();
  if (split.decay3 < 0.0 || split.decay4 < 0.0) throw std::invalid_argument("decay rates must be >= 0");
  const double deph3 = p.gamma3 - 0.5 * split.decay3;
  const double deph4 = p.gamma4 - 0.5 * split.decay4;
  if (deph3 < 0.0 || deph4 < 0.0)
    throw std::invalid_argument("population decay exceeds twice the total dephasing");

  // Rotating frame, hbar = 1; index k holds level |k+1>.
  Mat4 h = Mat4::Zero();
  h(1, 1) = -(delta - p.delta_c);
  h(2, 2) = -delta;
  h(3, 3) = -(delta - p.delta_mw);
  h(0, 1) = h(1, 0) = 0.5 * p.omega_p;
  h(1, 2) = h(2, 1) = 0.5 * p.omega_c;
  h(2, 3) = h(3, 2) = 0.5 * p.omega_mw;

  const Mat4 id = Mat4::Identity();
  Mat16 l = cplx{0.0, -1.0} * (kron(h, id) - kron(id, h.transpose()));

  add_dissipator(l, transition(0, 1, std::sqrt(p.natural_linewidth())));  // |2> -> |1>
  if (split.decay3 > 0.0) add_dissipator(l, transition(1, 2, std::sqrt(split.decay3)));  // |3> -> |2>
  if (split.decay4 > 0.0) add_dissipator(l, transition(0, 3, std::sqrt(split.decay4)));  // |4> -> |1>
  if (deph3 > 0.0) add_dissipator(l, transition(2, 2, std::sqrt(2.0 * deph3)));
  if (deph4 > 0.0) add_dissipator(l, transition(3, 3, std::sqrt(2.0 * deph4)));
  return l;
}

DensityMatrix steady_state(const SystemParams& p, double delta, const GammaSplit& split) {
  Mat16 l = liouvillian(p, delta, split);
  const double norm = l.cwiseAbs().maxCoeff();
  l /= norm;

  Eigen::FullPivLU<Mat16> rank_check(l);
  if (rank_check.rank() < 15) throw SteadyStateError("steady state is not unique");

  Mat16 a = l;
  a.row(0).setZero();
  for (int k = 0; k < 4; ++k) a(0, 5 * k) = 1.0;  // trace row
  Vec16 b = Vec16::Zero();
  b(0) = 1.0;

  Eigen::PartialPivLU<Mat16> lu(a);
  Vec16 x = lu.solve(b);
  x += lu.solve(b - a * x);  // one refinement step

  DensityMatrix out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.rho(i, j) = x(4 * i + j);
  out.residual = (l * x).norm() / l.norm();
  if (!(out.residual <= 1e-10)) throw SteadyStateError("steady-state residual too large");
  return out;
}

WeakProbeEstimate weak_probe_extrapolation(const SystemParams& p, double delta,
                                           std::span<const double> probe_scales,
                                           const GammaSplit& split) {
  const std::size_t n = probe_scales.size();
  if (n < 3) throw std::invalid_argument("need at least three probe scales");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(probe_scales[k] > 0.0)) throw std::invalid_argument("probe scales must be > 0");
    if (k > 0 && !(probe_scales[k] < probe_scales[k - 1]))
      throw std::invalid_argument("probe scales must be strictly decreasing");
  }

  WeakProbeEstimate est;
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    SystemParams q = p;
    q.omega_p = probe_scales[k] * p.natural_linewidth();
    est.samples.push_back(steady_state(q, delta, split).probe_coherence() / q.omega_p);
    h[k] = probe_scales[k] * probe_scales[k];
  }

  // Neville tableau evaluated at Omega_p^2 = 0.
  std::vector<std::vector<cplx>> t(n, std::vector<cplx>(n));
  for (std::size_t k = 0; k < n; ++k) {
    t[k][0] = est.samples[k];
    for (std::size_t m = 1; m <= k; ++m)
      t[k][m] = (h[k - m] * t[k][m - 1] - h[k] * t[k - 1][m - 1]) / (h[k - m] - h[k]);
  }
  est.value = t[n - 1][n - 1];
  est.error_estimate = std::abs(t[n - 1][n - 1] - t[n - 1][n - 2]);
  for (const cplx& s : est.samples) est.raw_errors.push_back(std::abs(s - est.value));
  // Differences already at roundoff level count as converged.
  const double floor = 1e-12 * std::abs(est.value);
  for (std::size_t k = 2; k < n; ++k) {
    const double later = std::abs(est.samples[k] - est.samples[k - 1]);
    const double earlier = std::abs(est.samples[k - 1] - est.samples[k - 2]);
    if (later > floor && !(later < earlier)) est.monotone = false;
  }
  return est;
}

}  // namespace rydmw
