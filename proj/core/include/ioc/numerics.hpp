#pragma once

#include <Eigen/Dense>

namespace ioc {

/// Default relative factor for singular-value rank decisions.
inline constexpr double kDefaultRankRelTol = 1e-12;

/// Scale-relative symmetry tolerance: 1e-10 * max(1, ||S||_F).
double symmetry_tolerance(const Eigen::MatrixXd& S);

/// Scale-relative PSD tolerance: 1e-8 * max(1, ||Q||_F).
double psd_tolerance(const Eigen::MatrixXd& Q);

/// Singular-value threshold max(p, q) * sigma_max * rel_tol.
double rank_threshold(Eigen::Index rows, Eigen::Index cols, double sigma_max,
                      double rel_tol = kDefaultRankRelTol);

int numerical_rank(const Eigen::MatrixXd& M,
                   double rel_tol = kDefaultRankRelTol);

double max_asymmetry(const Eigen::MatrixXd& S);

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& S) {
  return 0.5 * (S + S.transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& S);
double max_eigenvalue(const Eigen::MatrixXd& S);

/// Frobenius projection onto the PSD cone (eigenvalue clamping).
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& S);

/// Eigenvalues in [-tol, 0) are set to zero; larger negative ones are kept.
Eigen::MatrixXd clamp_small_negative_eigenvalues(const Eigen::MatrixXd& S,
                                                 double tol);

/// Frobenius relative error ||estimate - truth||_F / ||truth||_F.
double relative_error(const Eigen::MatrixXd& estimate,
                      const Eigen::MatrixXd& truth);

}  // namespace ioc
