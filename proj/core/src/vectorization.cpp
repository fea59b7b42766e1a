#include "ioc/vectorization.hpp"

#include <cmath>
#include <sstream>

#include "ioc/errors.hpp"
#include "ioc/numerics.hpp"

namespace ioc {

Eigen::VectorXd vec(const Eigen::MatrixXd& M) {
  return Eigen::Map<const Eigen::VectorXd>(M.data(), M.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows,
                      Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "unvec: size mismatch");
  }
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

Eigen::Index dim_from_vech_size(Eigen::Index k) {
  const auto n = static_cast<Eigen::Index>(
      std::llround((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0));
  if (vech_size(n) != k) {
    std::ostringstream msg;
    msg << "length " << k << " is not a triangular number";
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  return n;
}

Eigen::VectorXd vech(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "vech: matrix is not square");
  }
  const double asym = max_asymmetry(S);
  if (asym > symmetry_tolerance(S)) {
    std::ostringstream msg;
    msg << "vech: max|S - S^T| = " << asym;
    throw Error(ErrorCode::kAsymmetricInput, msg.str());
  }
  const Eigen::Index n = S.rows();
  Eigen::VectorXd v(vech_size(n));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) v(k++) = S(i, j);
  }
  return v;
}

Eigen::MatrixXd unvech(const Eigen::VectorXd& v) {
  const Eigen::Index n = dim_from_vech_size(v.size());
  Eigen::MatrixXd S(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      S(i, j) = v(k);
      S(j, i) = v(k);
      ++k;
    }
  }
  return S;
}

Eigen::MatrixXd vech_basis_matrix(Eigen::Index n, Eigen::Index k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(vech_size(n));
  e(k) = 1.0;
  return unvech(e);
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

DuplicationMap DuplicationMap::create(Eigen::Index n) {
  DuplicationMap map;
  map.n = n;
  map.D = Eigen::MatrixXd::Zero(n * n, vech_size(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const Eigen::Index k = vech_index(i, j, n);
      map.D(i + j * n, k) = 1.0;
      map.D(j + i * n, k) = 1.0;
    }
  }
  return map;
}

Eigen::VectorXd vech_gradient(const Eigen::MatrixXd& G) {
  const Eigen::Index n = G.rows();
  Eigen::VectorXd g(vech_size(n));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      g(k++) = (i == j) ? G(i, i) : G(i, j) + G(j, i);
    }
  }
  return g;
}

}  // namespace ioc
