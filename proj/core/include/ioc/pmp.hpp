#pragma once

#include <Eigen/Dense>

#include "ioc/types.hpp"

namespace ioc {

/// Stacked first-order optimality conditions of the finite-horizon LQR.
///
/// With z_t = (x_t, lambda_t), t = 2..N, and Z = (z_2, ..., z_N), the
/// conditions read F(Q) Z = A_tilde x_bar where
///
///   F(Q) = [ Et           Ft ]     E  = [I  BB'; 0  A']   F  = [A  0; -Q  I]
///          [ -F  E           ]     Et = [I  BB'; 0  0 ]   Ft = [0  0;  0  I]
///          [     ...  ...    ]
///          [          -F   E ]
///
/// and A_tilde = [A; 0; ...; 0]. The first block row encodes
/// x_2 + BB' lambda_2 = A x_bar and lambda_N = 0; the others encode the state
/// and adjoint recursions. Inputs follow from u_t = -B' lambda_{t+1}.
struct PmpSystem {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Eigen::Index N = 0;
  Eigen::MatrixXd F;        ///< 2n(N-1) x 2n(N-1)
  Eigen::MatrixXd A_tilde;  ///< 2n(N-1) x n
  Eigen::MatrixXd G_x;      ///< n(N-1) x 2n(N-1), picks x_2..x_N
  Eigen::MatrixXd G_u;      ///< m(N-1) x 2n(N-1), maps to u_1..u_{N-1}

  Eigen::Index size() const { return F.rows(); }
};

/// Q must be symmetric; F(Q) is invertible for every PSD Q.
PmpSystem build_pmp_system(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                           Eigen::Index N);

struct PmpSolution {
  Eigen::MatrixXd x;       ///< n x (N-1): x_2..x_N
  Eigen::MatrixXd lambda;  ///< n x (N-1): lambda_2..lambda_N
  Eigen::MatrixXd u;       ///< m x (N-1): u_1..u_{N-1}

  /// Full episode with x_1 = x_bar prepended.
  Episode episode(const Eigen::VectorXd& x_bar) const;
};

/// LU factorization of F(Q), reused across right-hand sides. Throws
/// SingularSystem when the reciprocal condition estimate is below 1e-14.
class PmpFactorization {
 public:
  explicit PmpFactorization(const PmpSystem& pmp);

  /// F(Q)^{-1} rhs.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  /// F(Q)^{-T} rhs.
  Eigen::MatrixXd solve_transposed(const Eigen::MatrixXd& rhs) const;
  /// Reciprocal 1-norm condition estimate.
  double rcond() const { return rcond_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

/// Solves F(Q) Z = A_tilde x_bar and unpacks states, adjoints and inputs.
PmpSolution pmp_solve(const PmpSystem& pmp, const Eigen::VectorXd& x_bar);

/// Unpacks a stacked solution vector Z.
PmpSolution unpack_pmp(const PmpSystem& pmp, const Eigen::VectorXd& Z);

}  // namespace ioc
