#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ioc/optimize.hpp"
#include "ioc/types.hpp"

namespace ioc {

/// Which observations the risk compares against: the states y_2..y_N or the
/// inputs mu_1..mu_{N-1}.
enum class RiskMode { kStateObs, kInputObs };
std::string_view to_string(RiskMode mode);

struct RiskSettings {
  double phi = kDefaultPhi;
  /// Smoothing of the PSD surrogate f_eps(-Q) <= 0.
  double epsilon = 1e-3;
  double penalty_weight = 1e4;
  /// The weight grows tenfold per round while a constraint is violated.
  int max_penalty_rounds = 6;
  MinimizerOptions optimizer;
};

/// Empirical risk
///   R_M(Q) = (1/M) sum_i || obs_i - G Z_i(Q) ||^2,  F(Q) Z_i = A_tilde x_bar_i
/// with G selecting states or inputs from the stacked PMP solution.
class RiskProblem {
 public:
  /// Throws DimensionMismatch or InvalidArgument.
  RiskProblem(LtiSystem sys, TrajectoryBundle bundle, RiskMode mode,
              RiskSettings settings = {});

  const LtiSystem& sys() const { return sys_; }
  const TrajectoryBundle& bundle() const { return bundle_; }
  RiskMode mode() const { return mode_; }
  const RiskSettings& settings() const { return settings_; }
  /// Observations, one column per episode.
  const Eigen::MatrixXd& observations() const { return obs_; }
  /// Initial states, one column per episode.
  const Eigen::MatrixXd& initial_states() const { return x_bar_; }
  /// Mean squared observation norm; the optimizer works on R_M / scale.
  double scale() const { return scale_; }

 private:
  LtiSystem sys_;
  TrajectoryBundle bundle_;
  RiskMode mode_;
  RiskSettings settings_;
  Eigen::MatrixXd obs_;
  Eigen::MatrixXd x_bar_;
  double scale_ = 1.0;
};

struct RiskValue {
  double value = 0.0;
  Eigen::VectorXd per_episode;
};

/// Q only needs to be symmetric with F(Q) nonsingular; the estimator
/// explores slightly indefinite Q inside the penalty region.
RiskValue eval_risk(const RiskProblem& problem, const Eigen::MatrixXd& Q);

/// Gradient of R_M over symmetric matrices by one adjoint solve batched
/// across episodes.
Eigen::MatrixXd risk_gradient(const RiskProblem& problem, const Eigen::MatrixXd& Q);

struct RiskAndGradient {
  double value = 0.0;
  Eigen::MatrixXd gradient;
};
RiskAndGradient eval_risk_and_gradient(const RiskProblem& problem,
                                       const Eigen::MatrixXd& Q);

struct EstimateTracePoint {
  int iteration = 0;
  double objective = 0.0;
  int penalty_round = 0;
};

struct ConstraintActivity {
  double psd_margin = 0.0;   ///< lambda_min(Q_hat)
  double ball_margin = 0.0;  ///< phi - ||Q_hat||_F^2
};

struct EstimateResult {
  CostMatrix Q_hat;
  /// Non-increasing inside each penalty round.
  std::vector<EstimateTracePoint> objective_trace;
  double grad_norm_final = 0.0;
  double risk = 0.0;
  ConstraintActivity constraint_activity;
  double penalty_weight_final = 0.0;
  int iterations = 0;
  bool converged = false;
  /// The final iterate needed a projection onto the PSD ball.
  bool projected = false;
};

/// Penalized quasi-Newton descent on vech(Q) from Q = I:
///   R_M(Q)/scale + w max(0, f_eps(-Q))^2 + w max(0, ||Q||^2 - phi)^2.
/// Never throws on non-convergence; converged = false marks it.
EstimateResult estimate(const RiskProblem& problem);

/// Shared penalty terms; exposed for the baseline estimator.
struct PenaltyValue {
  double value = 0.0;
  Eigen::MatrixXd gradient;  ///< with respect to Q
  double psd_violation = 0.0;
  double ball_violation = 0.0;
};
PenaltyValue constraint_penalty(const Eigen::MatrixXd& Q, double epsilon,
                                double weight, double phi);

}  // namespace ioc
