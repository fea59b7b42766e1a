#include "ioc/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace ioc {

double symmetry_tolerance(const Eigen::MatrixXd& S) {
  return 1e-10 * std::max(1.0, S.norm());
}

double psd_tolerance(const Eigen::MatrixXd& Q) {
  return 1e-8 * std::max(1.0, Q.norm());
}

double rank_threshold(Eigen::Index rows, Eigen::Index cols, double sigma_max,
                      double rel_tol) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * rel_tol;
}

int numerical_rank(const Eigen::MatrixXd& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double tol = rank_threshold(M.rows(), M.cols(), s(0), rel_tol);
  return static_cast<int>((s.array() > tol).count());
}

double max_asymmetry(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols()) return std::numeric_limits<double>::infinity();
  if (S.size() == 0) return 0.0;
  return (S - S.transpose()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(S),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(S),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(S));
  const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
  return symmetrize(es.eigenvectors() * clamped.asDiagonal() *
                    es.eigenvectors().transpose());
}

Eigen::MatrixXd clamp_small_negative_eigenvalues(const Eigen::MatrixXd& S,
                                                 double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(S));
  Eigen::VectorXd w = es.eigenvalues();
  bool changed = false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0 && w(i) >= -tol) {
      w(i) = 0.0;
      changed = true;
    }
  }
  if (!changed) return symmetrize(S);
  return symmetrize(es.eigenvectors() * w.asDiagonal() *
                    es.eigenvectors().transpose());
}

double relative_error(const Eigen::MatrixXd& estimate,
                      const Eigen::MatrixXd& truth) {
  return (estimate - truth).norm() / truth.norm();
}

}  // namespace ioc
