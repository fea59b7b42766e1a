#pragma once

#include <Eigen/Dense>

#include "ioc/types.hpp"

namespace ioc {

struct DiscretePair {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

/// Zero-order-hold discretization: A = exp(A_hat dt) and
/// B = int_0^dt exp(A_hat s) ds B_hat, read off one exponential of the
/// augmented block [[A_hat, B_hat], [0, 0]] dt. Throws InvalidArgument for
/// dt <= 0 or non-finite input.
DiscretePair discretize_pair(const Eigen::MatrixXd& A_hat,
                             const Eigen::MatrixXd& B_hat, double dt);

/// discretize_pair followed by LtiSystem validation.
LtiSystem discretize(const Eigen::MatrixXd& A_hat, const Eigen::MatrixXd& B_hat,
                     double dt);

}  // namespace ioc
