#include "ioc/smoothing.hpp"

#include <cmath>

#include "ioc/errors.hpp"
#include "ioc/numerics.hpp"

namespace ioc {

SmoothedMaxEig smoothed_max_eig(const Eigen::MatrixXd& Q, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  if (Q.rows() != Q.cols() || Q.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "Q must be square and nonempty");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(Q));
  const Eigen::VectorXd& s = eig.eigenvalues();
  const double top = s.maxCoeff();
  const Eigen::VectorXd w = ((s.array() - top) / epsilon).exp().matrix();
  const double total = w.sum();  // >= 1
  SmoothedMaxEig out;
  out.value = top + epsilon * std::log(total);
  const Eigen::MatrixXd& V = eig.eigenvectors();
  out.gradient = symmetrize(V * (w / total).asDiagonal() * V.transpose());
  return out;
}

}  // namespace ioc
