#pragma once

#include <Eigen/Dense>

namespace ioc {

struct SmoothedMaxEig {
  double value = 0.0;
  /// Softmax-weighted sum of eigenprojectors: symmetric PSD, unit trace.
  Eigen::MatrixXd gradient;
};

/// eps * ln tr(exp(Q / eps)), evaluated on the spectrum with the largest
/// eigenvalue factored out. Bounds: lambda_max <= value <= lambda_max + eps ln n.
/// Throws InvalidArgument for eps <= 0.
SmoothedMaxEig smoothed_max_eig(const Eigen::MatrixXd& Q, double epsilon);

}  // namespace ioc
