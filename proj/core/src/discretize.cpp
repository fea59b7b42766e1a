#include "ioc/discretize.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "ioc/errors.hpp"

namespace ioc {

DiscretePair discretize_pair(const Eigen::MatrixXd& A_hat,
                             const Eigen::MatrixXd& B_hat, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::kInvalidArgument, "dt must be positive and finite");
  }
  const Eigen::Index n = A_hat.rows();
  const Eigen::Index m = B_hat.cols();
  if (A_hat.cols() != n || B_hat.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "A_hat must be n x n and B_hat n x m");
  }
  if (!A_hat.allFinite() || !B_hat.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "continuous matrices must be finite");
  }
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = A_hat * dt;
  aug.topRightCorner(n, m) = B_hat * dt;
  // Pade scaling and squaring.
  const Eigen::MatrixXd E = aug.exp();
  return DiscretePair{E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

LtiSystem discretize(const Eigen::MatrixXd& A_hat, const Eigen::MatrixXd& B_hat,
                     double dt) {
  DiscretePair p = discretize_pair(A_hat, B_hat, dt);
  return LtiSystem::create(std::move(p.A), std::move(p.B));
}

}  // namespace ioc
