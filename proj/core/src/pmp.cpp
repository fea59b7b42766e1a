#include "ioc/pmp.hpp"

#include <cmath>
#include <sstream>

#include "ioc/errors.hpp"

namespace ioc {

PmpSystem build_pmp_system(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                           Eigen::Index N) {
  if (N < 2) throw Error(ErrorCode::kInvalidArgument, "horizon N must be >= 2");
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  if (Q.rows() != n || Q.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "Q must be n x n");
  }
  if (max_asymmetry(Q) > symmetry_tolerance(Q)) {
    throw Error(ErrorCode::kAsymmetricInput, "Q must be symmetric");
  }
  const Eigen::MatrixXd& A = sys.A();
  const Eigen::MatrixXd& B = sys.B();
  const Eigen::MatrixXd BBt = B * B.transpose();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::Index blocks = N - 1;
  const Eigen::Index w = 2 * n;

  PmpSystem pmp;
  pmp.n = n;
  pmp.m = m;
  pmp.N = N;
  pmp.F = Eigen::MatrixXd::Zero(w * blocks, w * blocks);

  // First block row: Et at column 0, Ft at the last column.
  pmp.F.block(0, 0, n, n) = I;
  pmp.F.block(0, n, n, n) = BBt;
  pmp.F.block(n, (blocks - 1) * w + n, n, n) += I;

  for (Eigen::Index k = 1; k < blocks; ++k) {
    const Eigen::Index r = k * w;
    const Eigen::Index prev = (k - 1) * w;
    const Eigen::Index cur = k * w;
    // -F = [-A 0; Q -I]
    pmp.F.block(r, prev, n, n) = -A;
    pmp.F.block(r + n, prev, n, n) = symmetrize(Q);
    pmp.F.block(r + n, prev + n, n, n) = -I;
    // E = [I BB'; 0 A']
    pmp.F.block(r, cur, n, n) = I;
    pmp.F.block(r, cur + n, n, n) = BBt;
    pmp.F.block(r + n, cur + n, n, n) = A.transpose();
  }

  pmp.A_tilde = Eigen::MatrixXd::Zero(w * blocks, n);
  pmp.A_tilde.topRows(n) = A;

  pmp.G_x = Eigen::MatrixXd::Zero(n * blocks, w * blocks);
  pmp.G_u = Eigen::MatrixXd::Zero(m * blocks, w * blocks);
  for (Eigen::Index k = 0; k < blocks; ++k) {
    pmp.G_x.block(k * n, k * w, n, n) = I;
    pmp.G_u.block(k * m, k * w + n, m, n) = -B.transpose();
  }
  return pmp;
}

Episode PmpSolution::episode(const Eigen::VectorXd& x_bar) const {
  const Eigen::Index N = x.cols() + 1;
  Episode e{Eigen::MatrixXd(x.rows(), N), u};
  e.x.col(0) = x_bar;
  e.x.rightCols(N - 1) = x;
  return e;
}

PmpFactorization::PmpFactorization(const PmpSystem& pmp) : lu_(pmp.F) {
  rcond_ = lu_.rcond();
  if (!std::isfinite(rcond_) || rcond_ < 1e-14) {
    std::ostringstream msg;
    msg << "F(Q) is numerically singular (rcond " << rcond_ << ")";
    throw Error(ErrorCode::kSingularSystem, msg.str());
  }
}

Eigen::MatrixXd PmpFactorization::solve(const Eigen::MatrixXd& rhs) const {
  return lu_.solve(rhs);
}

Eigen::MatrixXd PmpFactorization::solve_transposed(
    const Eigen::MatrixXd& rhs) const {
  return lu_.transpose().solve(rhs);
}

PmpSolution unpack_pmp(const PmpSystem& pmp, const Eigen::VectorXd& Z) {
  const Eigen::Index n = pmp.n;
  const Eigen::Index blocks = pmp.N - 1;
  PmpSolution sol{Eigen::MatrixXd(n, blocks), Eigen::MatrixXd(n, blocks),
                  Eigen::MatrixXd(pmp.m, blocks)};
  for (Eigen::Index k = 0; k < blocks; ++k) {
    sol.x.col(k) = Z.segment(2 * n * k, n);
    sol.lambda.col(k) = Z.segment(2 * n * k + n, n);
  }
  const Eigen::VectorXd u = pmp.G_u * Z;
  for (Eigen::Index k = 0; k < blocks; ++k) {
    sol.u.col(k) = u.segment(k * pmp.m, pmp.m);
  }
  return sol;
}

PmpSolution pmp_solve(const PmpSystem& pmp, const Eigen::VectorXd& x_bar) {
  if (x_bar.size() != pmp.n) {
    throw Error(ErrorCode::kDimensionMismatch, "x_bar must have n entries");
  }
  const PmpFactorization lu(pmp);
  const Eigen::VectorXd Z = lu.solve(pmp.A_tilde * x_bar);
  return unpack_pmp(pmp, Z);
}

}  // namespace ioc
