#include "ioc/forward_lqr.hpp"

#include <sstream>

#include "ioc/errors.hpp"

namespace ioc {

namespace {

void check_cost_shape(const LtiSystem& sys, const Eigen::MatrixXd& Q) {
  if (Q.rows() != sys.n() || Q.cols() != sys.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "Q must be n x n");
  }
  if (max_asymmetry(Q) > symmetry_tolerance(Q)) {
    throw Error(ErrorCode::kAsymmetricInput, "Q must be symmetric");
  }
}

void check_horizon(Eigen::Index N) {
  if (N < 2) throw Error(ErrorCode::kInvalidArgument, "horizon N must be >= 2");
}

}  // namespace

GainSchedule solve_riccati(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                           Eigen::Index N) {
  check_horizon(N);
  check_cost_shape(sys, Q);
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::MatrixXd& B = sys.B();
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  const Eigen::MatrixXd Qs = symmetrize(Q);

  GainSchedule gains;
  gains.K.resize(static_cast<std::size_t>(N - 1));
  gains.P.resize(static_cast<std::size_t>(N - 1));
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  gains.P.back() = P;
  for (Eigen::Index t = N - 1; t >= 1; --t) {
    const Eigen::MatrixXd PB = P * B;
    const Eigen::MatrixXd S = B.transpose() * PB + Eigen::MatrixXd::Identity(m, m);
    const Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "B'P B + I is not positive definite at t = " << t;
      throw Error(ErrorCode::kNumericalFailure, msg.str());
    }
    const Eigen::MatrixXd BtPA = PB.transpose() * A;
    const Eigen::MatrixXd K = -llt.solve(BtPA);
    gains.K[static_cast<std::size_t>(t - 1)] = K;
    if (t == 1) break;
    // A'PA + Q - A'PB S^{-1} B'PA, written with K = -S^{-1} B'PA.
    P = A.transpose() * P * A + Qs + BtPA.transpose() * K;
    P = symmetrize(P);
    gains.P[static_cast<std::size_t>(t - 2)] = P;
  }
  return gains;
}

GainSchedule solve_riccati(const LtiSystem& sys, const CostMatrix& Q,
                           Eigen::Index N) {
  return solve_riccati(sys, Q.matrix(), N);
}

std::vector<Eigen::MatrixXd> closed_loop_matrices(const LtiSystem& sys,
                                                  const GainSchedule& gains) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(gains.K.size());
  for (const auto& K : gains.K) out.push_back(sys.A() + sys.B() * K);
  return out;
}

Episode simulate(const LtiSystem& sys, const GainSchedule& gains,
                 const Eigen::VectorXd& x_bar) {
  if (x_bar.size() != sys.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "x_bar must have n entries");
  }
  const Eigen::Index N = gains.horizon();
  Episode e{Eigen::MatrixXd(sys.n(), N), Eigen::MatrixXd(sys.m(), N - 1)};
  e.x.col(0) = x_bar;
  for (Eigen::Index t = 0; t + 1 < N; ++t) {
    const auto& K = gains.K[static_cast<std::size_t>(t)];
    if (K.rows() != sys.m() || K.cols() != sys.n()) {
      throw Error(ErrorCode::kDimensionMismatch, "gain shape does not match system");
    }
    e.u.col(t) = K * e.x.col(t);
    e.x.col(t + 1) = sys.A() * e.x.col(t) + sys.B() * e.u.col(t);
  }
  return e;
}

Episode solve_qp_oracle(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                        Eigen::Index N, const Eigen::VectorXd& x_bar) {
  check_horizon(N);
  check_cost_shape(sys, Q);
  if (x_bar.size() != sys.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "x_bar must have n entries");
  }
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  const Eigen::Index nu = m * (N - 1);
  if (nu > kQpOracleMaxInputs) {
    std::ostringstream msg;
    msg << "m(N-1) = " << nu << " exceeds " << kQpOracleMaxInputs;
    throw Error(ErrorCode::kSizeGuardExceeded, msg.str());
  }
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::MatrixXd& B = sys.B();

  // x_t = Phi_t x_bar + Gamma_t U, with U = (u_1, ..., u_{N-1}).
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(nu, nu);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nu);
  Eigen::VectorXd phi_x = x_bar;
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n, nu);
  for (Eigen::Index t = 1; t < N - 1; ++t) {
    // advance from x_t to x_{t+1}
    gamma = A * gamma;
    gamma.middleCols((t - 1) * m, m) += B;
    phi_x = A * phi_x;
    const Eigen::MatrixXd QG = Q * gamma;
    H.noalias() += gamma.transpose() * QG;
    g.noalias() += QG.transpose() * phi_x;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(H));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure,
                "QP Hessian is not positive definite; Q must be PSD");
  }
  const Eigen::VectorXd U = -llt.solve(g);

  Episode e{Eigen::MatrixXd(n, N), Eigen::MatrixXd(m, N - 1)};
  e.x.col(0) = x_bar;
  for (Eigen::Index t = 0; t + 1 < N; ++t) {
    e.u.col(t) = U.segment(t * m, m);
    e.x.col(t + 1) = A * e.x.col(t) + B * e.u.col(t);
  }
  return e;
}

double lqr_cost(const Eigen::MatrixXd& Q, const Episode& episode) {
  double J = 0.0;
  for (Eigen::Index t = 0; t < episode.u.cols(); ++t) {
    J += episode.u.col(t).squaredNorm() +
         episode.x.col(t).dot(Q * episode.x.col(t));
  }
  return J;
}

}  // namespace ioc
