#pragma once

// Three-state, single-input reference instance with one episode of N = 15.
// Matrices are given to four decimals; the rounded cost has a tiny negative
// eigenvalue (-3e-5), so data are generated from its rank-one truncation.

#include <Eigen/Dense>

namespace ioc::testing {

inline Eigen::MatrixXd example_A() {
  return (Eigen::MatrixXd(3, 3) << -0.1922, -0.2490, 1.2347,  //
          -0.2741, -1.0642, -0.2296,                          //
          1.5301, 1.6035, -1.5062)
      .finished();
}

inline Eigen::MatrixXd example_B() {
  return (Eigen::MatrixXd(3, 1) << -0.4446, -0.1559, 0.2761).finished();
}

inline Eigen::VectorXd example_x0() {
  return (Eigen::VectorXd(3) << -25.0136, -18.9592, -14.8221).finished();
}

inline constexpr Eigen::Index kExampleN = 15;

/// Cost as tabulated (four decimals, slightly indefinite).
inline Eigen::MatrixXd example_Q_rounded() {
  return (Eigen::MatrixXd(3, 3) << 0.0068, -0.0116, -0.0102,  //
          -0.0116, 0.0197, 0.0174,                            //
          -0.0102, 0.0174, 0.0154)
      .finished();
}

/// Rank-one PSD truncation of the rounded cost: v v'.
inline Eigen::MatrixXd example_Q_bar() {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(example_Q_rounded());
  const Eigen::VectorXd v = eig.eigenvectors().col(2) * std::sqrt(eig.eigenvalues()(2));
  return v * v.transpose();
}

/// Reference kernel direction (unnormalized).
inline Eigen::MatrixXd example_delta_Q() {
  return (Eigen::MatrixXd(3, 3) << 0.0723, -0.6085, -0.1447,  //
          -0.6085, -0.0422, -0.6661,                          //
          -0.1447, -0.6661, -0.3976)
      .finished();
}

/// Reference dual optimum (rank 2).
inline Eigen::MatrixXd example_Phi_star() {
  return (Eigen::MatrixXd(3, 3) << 7.5572, 1.6696, 3.1474,  //
          1.6696, 4.4056, -3.8723,                          //
          3.1474, -3.8723, 6.4792)
      .finished();
}

}  // namespace ioc::testing
