#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ioc {

struct MinimizerOptions {
  int max_iters = 2000;
  /// Stop when max |gradient entry| falls below this.
  double grad_tol = 1e-7;
  double function_tol = 1e-14;
  double parameter_tol = 1e-14;
  int memory = 10;
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
};

struct MinimizerResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
  /// Initial point and accepted steps only; values never increase.
  std::vector<TracePoint> trace;
};

/// Returns false when the point is outside the domain; the line search then
/// backs off. `grad` is null when only the value is requested.
using ObjectiveFn =
    std::function<bool(const Eigen::VectorXd& x, double& value, Eigen::VectorXd* grad)>;

/// Limited-memory BFGS with a Wolfe line search. Throws NumericalFailure if
/// the objective cannot be evaluated at x0.
MinimizerResult minimize_lbfgs(const ObjectiveFn& objective,
                               const Eigen::VectorXd& x0,
                               const MinimizerOptions& options = {});

}  // namespace ioc
