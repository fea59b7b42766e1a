#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ioc/types.hpp"

namespace ioc {

/// Time-varying optimal feedback for the finite-horizon problem
///   min sum_{t=1}^{N-1} u_t' u_t + x_t' Q x_t,  x_{t+1} = A x_t + B u_t.
/// K holds K_1..K_{N-1}; P holds P_2..P_N with P_N = 0.
struct GainSchedule {
  std::vector<Eigen::MatrixXd> K;
  std::vector<Eigen::MatrixXd> P;

  Eigen::Index horizon() const { return static_cast<Eigen::Index>(K.size()) + 1; }
  /// 1-based accessors matching the math: gain(t), t = 1..N-1.
  const Eigen::MatrixXd& gain(Eigen::Index t) const { return K.at(t - 1); }
  /// riccati(t), t = 2..N.
  const Eigen::MatrixXd& riccati(Eigen::Index t) const { return P.at(t - 2); }
};

/// Backward Riccati recursion from P_N = 0. Each step factors B'PB + I with a
/// Cholesky decomposition and re-symmetrizes P. Q only needs to be symmetric.
GainSchedule solve_riccati(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                           Eigen::Index N);
GainSchedule solve_riccati(const LtiSystem& sys, const CostMatrix& Q,
                           Eigen::Index N);

/// A + B K_t for t = 1..N-1.
std::vector<Eigen::MatrixXd> closed_loop_matrices(const LtiSystem& sys,
                                                  const GainSchedule& gains);

/// Rolls the closed loop forward from x_1 = x_bar.
Episode simulate(const LtiSystem& sys, const GainSchedule& gains,
                 const Eigen::VectorXd& x_bar);

/// Largest stacked input dimension m(N-1) accepted by solve_qp_oracle.
inline constexpr Eigen::Index kQpOracleMaxInputs = 2000;

/// Independent check on solve_riccati: eliminates the states through the
/// dynamics and minimizes the resulting strictly convex quadratic in the
/// stacked inputs with a dense Cholesky solve.
Episode solve_qp_oracle(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                        Eigen::Index N, const Eigen::VectorXd& x_bar);

/// J = sum_{t=1}^{N-1} u_t' u_t + x_t' Q x_t.
double lqr_cost(const Eigen::MatrixXd& Q, const Episode& episode);

}  // namespace ioc
