#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ioc/noisy.hpp"
#include "ioc/types.hpp"

namespace ioc {

struct BaselineSettings {
  double epsilon = 1e-3;
  double penalty_weight = 1e4;
  int max_penalty_rounds = 6;
  /// Only used to size the returned CostMatrix's ball.
  double phi = kDefaultPhi;
  MinimizerOptions optimizer;
};

/// Residual minimization over the optimality conditions:
///   sum_i sum_t || lambda_t - A' lambda_{t+1} - Q y_t ||^2   (t = 2..N-1)
///             + || r mu_t + B' lambda_{t+1} ||^2            (t = 1..N-1)
/// with lambda_N = 0 and a free input weight R = r I. The objective is
/// homogeneous in (Q, r, lambda), so tr(Q) = n fixes the scale; Q is only
/// recovered up to a positive factor.
struct BaselineResult {
  CostMatrix Q_hat;  ///< tr(Q_hat) = n
  double input_weight = 0.0;
  /// Sum of squared residuals at the solution (adjoints eliminated).
  double objective = 0.0;
  /// All observations vanish; Q_hat = I is returned.
  bool degenerate = false;
  bool converged = false;
  int iterations = 0;
  std::vector<EstimateTracePoint> objective_trace;
};

/// Quadratic form S with objective theta' S theta, theta = (vech Q, r), after
/// eliminating the adjoints exactly. Requires N >= 3.
Eigen::MatrixXd baseline_normal_matrix(const LtiSystem& sys,
                                       const TrajectoryBundle& bundle);

BaselineResult estimate_rm(const LtiSystem& sys, const TrajectoryBundle& bundle,
                           const BaselineSettings& settings = {});

/// min_c ||c Q_hat - Q_bar||_F / ||Q_bar||_F, attained at
/// c = <Q_hat, Q_bar> / ||Q_hat||^2.
double scaled_relative_error(const Eigen::MatrixXd& Q_hat, const Eigen::MatrixXd& Q_bar);

}  // namespace ioc
