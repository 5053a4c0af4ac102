#pragma once

// Box-constrained Levenberg-Marquardt with a finite-difference Jacobian.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rydmw {

struct LmOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-10;      // ||D dx|| <= tol * ||D x||
  double gradient_tolerance = 1e-12;  // max cosine between r and a Jacobian column
  double fd_relative_step = 1e-6;     // central differences, h = step * max(|x|, typical)
};

struct LmProblem {
  std::size_t residual_count = 0;
  std::function<void(std::span<const double> x, std::span<double> residual)> residuals;
  std::vector<double> lower;    // may hold -inf
  std::vector<double> upper;    // may hold +inf
  std::vector<double> typical;  // magnitude used for FD steps when x ~ 0
};

struct LmResult {
  std::vector<double> x;
  double sum_squares = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string reason;
};

LmResult levenberg_marquardt(const LmProblem& problem, std::vector<double> x0, const LmOptions& options = {});

}  // namespace rydmw
