#pragma once

#include <Eigen/Dense>

namespace ioc {

// vec is column-major stacking; vech stacks the lower triangle column by
// column, so vech([[a, b], [b, c]]) = (a, b, c).

Eigen::VectorXd vec(const Eigen::MatrixXd& M);
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows,
                      Eigen::Index cols);

inline Eigen::Index vech_size(Eigen::Index n) { return n * (n + 1) / 2; }

/// Inverse of vech_size; throws DimensionMismatch if k is not triangular.
Eigen::Index dim_from_vech_size(Eigen::Index k);

/// Position of entry (i, j), i >= j, inside vech of an n x n matrix.
inline Eigen::Index vech_index(Eigen::Index i, Eigen::Index j, Eigen::Index n) {
  return j * n - j * (j - 1) / 2 + (i - j);
}

/// Throws AsymmetricInput if max|S - S^T| exceeds symmetry_tolerance(S).
Eigen::VectorXd vech(const Eigen::MatrixXd& S);
Eigen::MatrixXd unvech(const Eigen::VectorXd& v);

/// Symmetric basis matrix whose vech is the k-th unit vector.
Eigen::MatrixXd vech_basis_matrix(Eigen::Index n, Eigen::Index k);

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// The duplication matrix D with vec(S) = D vech(S) for symmetric S.
struct DuplicationMap {
  Eigen::Index n = 0;
  Eigen::MatrixXd D;

  static DuplicationMap create(Eigen::Index n);
};

inline Eigen::MatrixXd duplication_matrix(Eigen::Index n) {
  return DuplicationMap::create(n).D;
}

/// Turns a gradient with respect to the full symmetric matrix (Frobenius
/// pairing) into a gradient with respect to vech coordinates, i.e. D^T vec(G).
Eigen::VectorXd vech_gradient(const Eigen::MatrixXd& G);

}  // namespace ioc
