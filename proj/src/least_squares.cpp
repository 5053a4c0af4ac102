#include "rydmw/least_squares.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rydmw {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Evaluator {
  const LmProblem& problem;

  VectorXd residuals(const VectorXd& x) const {
    VectorXd r(problem.residual_count);
    problem.residuals(std::span<const double>(x.data(), std::size_t(x.size())),
                      std::span<double>(r.data(), std::size_t(r.size())));
    return r;
  }

  MatrixXd jacobian(const VectorXd& x, double rel_step) const {
    const auto n = x.size();
    MatrixXd jac(problem.residual_count, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double h = rel_step * std::max(std::abs(x[k]), problem.typical[std::size_t(k)]);
      VectorXd lo = x, hi = x;
      double span = 0.0;
      if (x[k] - h < problem.lower[std::size_t(k)]) {
        hi[k] += h;
        span = h;
      } else if (x[k] + h > problem.upper[std::size_t(k)]) {
        lo[k] -= h;
        span = h;
      } else {
        lo[k] -= h;
        hi[k] += h;
        span = 2.0 * h;
      }
      jac.col(k) = (residuals(hi) - residuals(lo)) / span;
    }
    return jac;
  }

  VectorXd project(VectorXd x) const {
    for (Eigen::Index k = 0; k < x.size(); ++k)
      x[k] = std::clamp(x[k], problem.lower[std::size_t(k)], problem.upper[std::size_t(k)]);
    return x;
  }
};

}  // namespace

LmResult levenberg_marquardt(const LmProblem& problem, std::vector<double> x0, const LmOptions& options) {
  const std::size_t n = x0.size();
  if (problem.lower.size() != n || problem.upper.size() != n || problem.typical.size() != n)
    throw std::invalid_argument("bounds/typical sizes must match the parameter count");
  if (problem.residual_count < n) throw std::invalid_argument("fewer residuals than parameters");
  for (double v : x0)
    if (!std::isfinite(v)) throw std::invalid_argument("initial guess must be finite");

  const Evaluator eval{problem};
  VectorXd x = eval.project(Eigen::Map<VectorXd>(x0.data(), Eigen::Index(n)));
  VectorXd r = eval.residuals(x);
  double cost = r.squaredNorm();

  LmResult out;
  VectorXd scale = VectorXd::Zero(Eigen::Index(n));
  double lambda = -1.0;
  double nu = 2.0;

  auto finish = [&](bool converged, std::string reason) {
    out.x.assign(x.data(), x.data() + x.size());
    out.sum_squares = cost;
    out.converged = converged;
    out.reason = std::move(reason);
    return out;
  };

  for (out.iterations = 1; out.iterations <= options.max_iterations; ++out.iterations) {
    if (cost == 0.0) return finish(true, "zero residual");
    const MatrixXd jac = eval.jacobian(x, options.fd_relative_step);
    const MatrixXd a = jac.transpose() * jac;
    const VectorXd g = jac.transpose() * r;

    // Marquardt scaling, non-decreasing so the trust region shape is stable.
    const double rnorm = std::sqrt(cost);
    out.gradient_norm = 0.0;
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      scale[k] = std::max(scale[k], a(k, k));
      if (a(k, k) > 0.0)
        out.gradient_norm = std::max(out.gradient_norm, std::abs(g[k]) / (std::sqrt(a(k, k)) * rnorm));
    }
    const double floor = std::max(scale.maxCoeff(), std::numeric_limits<double>::min()) * 1e-12;
    const VectorXd d = scale.cwiseMax(floor);
    if (out.gradient_norm <= options.gradient_tolerance) return finish(true, "gradient tolerance");
    if (lambda < 0.0) lambda = 1e-3;

    const double xnorm = (d.cwiseSqrt().asDiagonal() * x).norm();
    for (;;) {
      MatrixXd damped = a;
      damped.diagonal() += lambda * d;
      const VectorXd step = damped.ldlt().solve(-g);
      const VectorXd trial = eval.project(x + step);
      const VectorXd taken = trial - x;
      const double step_norm = (d.cwiseSqrt().asDiagonal() * taken).norm();

      const VectorXd r_trial = eval.residuals(trial);
      const double cost_trial = r_trial.allFinite() ? r_trial.squaredNorm() : std::numeric_limits<double>::infinity();
      const double predicted = -(2.0 * g.dot(taken) + taken.dot(a * taken));
      const double rho = predicted > 0.0 ? (cost - cost_trial) / predicted : -1.0;

      const bool small_step = step_norm <= options.step_tolerance * (xnorm + options.step_tolerance);
      if (rho > 0.0 && cost_trial < cost) {
        x = trial;
        r = r_trial;
        cost = cost_trial;
        lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;
        if (small_step) return finish(true, "step tolerance");
        break;
      }
      if (small_step) return finish(true, "step tolerance");
      lambda *= nu;
      nu *= 2.0;
      if (!std::isfinite(lambda) || lambda > 1e300) return finish(false, "damping diverged");
    }
  }
  out.iterations = options.max_iterations;
  return finish(false, "iteration limit");
}

}  // namespace rydmw
