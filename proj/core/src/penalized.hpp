#pragma once

// Penalty-continuation driver shared by the risk and baseline estimators.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ioc/noisy.hpp"
#include "ioc/optimize.hpp"

namespace ioc::detail {

struct PenalizedProblem {
  /// Smooth part in the free coordinates.
  ObjectiveFn smooth;
  /// Free coordinates -> symmetric cost matrix (affine).
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> to_matrix;
  /// Gradient with respect to the matrix -> gradient in free coordinates.
  std::function<Eigen::VectorXd(const Eigen::MatrixXd&)> pullback;
  double epsilon = 1e-3;
  double weight = 1e4;
  int max_rounds = 6;
  /// +inf disables the ball penalty.
  double phi = 0.0;
  MinimizerOptions optimizer;
  /// Trace values are multiplied by this before recording.
  double trace_scale = 1.0;
};

struct PenalizedRun {
  Eigen::VectorXd x;
  std::vector<EstimateTracePoint> trace;
  int iterations = 0;
  bool converged = false;
  double weight = 0.0;
  double grad_norm = 0.0;
};

/// Minimizes smooth + penalty, raising the weight tenfold until both
/// constraints hold to psd_tolerance and 1e-6 phi or the rounds run out.
inline PenalizedRun run_penalized(const PenalizedProblem& p, Eigen::VectorXd x0) {
  PenalizedRun run;
  run.x = std::move(x0);
  double weight = p.weight;
  for (int round = 0; round < p.max_rounds; ++round) {
    const ObjectiveFn f = [&](const Eigen::VectorXd& x, double& value,
                              Eigen::VectorXd* grad) {
      const Eigen::MatrixXd Q = p.to_matrix(x);
      const PenaltyValue pen = constraint_penalty(Q, p.epsilon, weight, p.phi);
      Eigen::VectorXd g;
      if (!p.smooth(x, value, grad ? &g : nullptr)) return false;
      value += pen.value;
      if (grad) *grad = g + p.pullback(pen.gradient);
      return true;
    };
    const MinimizerResult r = minimize_lbfgs(f, run.x, p.optimizer);
    run.x = r.x;
    for (const TracePoint& tp : r.trace) {
      run.trace.push_back({run.iterations + tp.iteration, tp.objective * p.trace_scale, round});
    }
    run.iterations += r.iterations;
    run.converged = r.converged;
    run.weight = weight;
    run.grad_norm = r.grad_norm * p.trace_scale;

    const Eigen::MatrixXd Q = p.to_matrix(run.x);
    const PenaltyValue pen = constraint_penalty(Q, p.epsilon, weight, p.phi);
    const bool ball_ok = !std::isfinite(p.phi) || pen.ball_violation <= 1e-6 * p.phi;
    if (pen.psd_violation <= psd_tolerance(Q) && ball_ok) break;
    weight *= 10.0;
  }
  return run;
}

}  // namespace ioc::detail
