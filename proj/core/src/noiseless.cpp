#include "ioc/noiseless.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ioc/errors.hpp"
#include "ioc/optimize.hpp"
#include "ioc/smoothing.hpp"
#include "ioc/vectorization.hpp"

namespace ioc {

namespace {

Eigen::MatrixXd combine(const Eigen::MatrixXd& base,
                        const std::vector<Eigen::MatrixXd>& dirs,
                        const Eigen::VectorXd& alpha) {
  Eigen::MatrixXd Q = base;
  for (std::size_t k = 0; k < dirs.size(); ++k) Q += alpha(static_cast<Eigen::Index>(k)) * dirs[k];
  return symmetrize(Q);
}

RecoveryResult finalize(Eigen::MatrixXd Q, IdentifiabilityReport report,
                        double residual, Eigen::VectorXd alpha) {
  const double tol = psd_tolerance(Q);
  const double lmin = min_eigenvalue(Q);
  if (lmin < -tol) {
    std::ostringstream msg;
    msg << "recovered cost has eigenvalue " << lmin << " below -" << tol;
    throw Error(ErrorCode::kPsdViolation, msg.str());
  }
  const bool clamped = lmin < 0.0;
  if (clamped) Q = clamp_small_negative_eigenvalues(Q, tol);
  const double phi = std::max(kDefaultPhi, Q.squaredNorm());
  return RecoveryResult{CostMatrix::create(Q, phi), std::move(report), residual,
                        clamped, std::move(alpha)};
}

// Largest h in [0, h_max] with lambda_min(Q + h D) >= -tol; lambda_min is
// concave in h, so the feasible set is an interval containing 0.
double feasible_extent(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& D,
                       double tol, double h_max) {
  if (min_eigenvalue(Q + h_max * D) >= -tol) return h_max;
  double lo = 0.0;
  double hi = h_max;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * h_max; ++i) {
    const double mid = 0.5 * (lo + hi);
    (min_eigenvalue(Q + mid * D) >= -tol ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

RecoveryResult recover_with_kernel(const LtiSystem& sys,
                                   const TrajectoryBundle& bundle,
                                   const IdentifiabilityReport& report,
                                   const RecoveryOptions& options) {
  const std::vector<Eigen::MatrixXd>& dirs = report.kernel_basis;
  const Eigen::Index eta = static_cast<Eigen::Index>(dirs.size());
  if (eta == 0) return recover_exact(sys, bundle, options);

  const Eigen::MatrixXd& Qp = report.Q_prime;
  const double scale = std::max(Qp.norm(), 1e-300);
  const Eigen::MatrixXd base = Qp / scale;

  // Minimize the smoothed largest eigenvalue of -Q(alpha), shrinking eps.
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(eta);
  const KernelSearchOptions& ko = options.kernel;
  bool last_converged = false;
  for (double eps = ko.epsilon_start; eps >= ko.epsilon_end * (1.0 - 1e-9);
       eps *= ko.epsilon_factor) {
    const ObjectiveFn f = [&](const Eigen::VectorXd& a, double& value,
                              Eigen::VectorXd* grad) {
      const SmoothedMaxEig s = smoothed_max_eig(-combine(base, dirs, a), eps);
      value = s.value;
      if (grad) {
        grad->resize(eta);
        for (Eigen::Index k = 0; k < eta; ++k) {
          (*grad)(k) = -(s.gradient.cwiseProduct(dirs[k])).sum();
        }
      }
      return true;
    };
    MinimizerOptions mo;
    mo.max_iters = ko.max_iters_per_round;
    mo.grad_tol = 1e-12;
    const MinimizerResult r = minimize_lbfgs(f, alpha, mo);
    alpha = r.x;
    last_converged = r.converged;
  }
  if (!alpha.allFinite()) {
    throw Error(ErrorCode::kSolverNotConverged,
                "kernel coefficient search diverged");
  }

  const Eigen::MatrixXd Q_unit = combine(base, dirs, alpha);
  const double tol = psd_tolerance(Q_unit * scale) / scale;
  if (min_eigenvalue(Q_unit) < -tol) {
    if (!last_converged) {
      throw Error(ErrorCode::kSolverNotConverged,
                  "kernel coefficient search stopped at an infeasible point");
    }
    std::ostringstream msg;
    msg << "no PSD point in the solution set (best lambda_min "
        << min_eigenvalue(Q_unit) * scale << ")";
    throw Error(ErrorCode::kPsdViolation, msg.str());
  }
  // The certificate says the PSD slice is a single point; probe each axis.
  const double h_max = 10.0 * (1.0 + Q_unit.norm());
  for (Eigen::Index k = 0; k < eta; ++k) {
    const double width = feasible_extent(Q_unit, dirs[k], tol, h_max) +
                         feasible_extent(Q_unit, -dirs[k], tol, h_max);
    if (width * scale > ko.ambiguity_width) {
      std::ostringstream msg;
      msg << "feasible coefficients span " << width * scale
          << " along kernel direction " << k;
      throw Error(ErrorCode::kAmbiguousSolution, msg.str());
    }
  }
  return finalize(Q_unit * scale, report, report.linear_residual, alpha * scale);
}

RecoveryResult recover_exact(const LtiSystem& sys, const TrajectoryBundle& bundle,
                             const RecoveryOptions& options) {
  IdentifiabilityReport report = assess(sys, bundle, options.assess);
  const Eigen::VectorXd rhs = stacked_negated_inputs(bundle);
  if (report.linear_residual > options.residual_rel_tol * rhs.norm()) {
    std::ostringstream msg;
    msg << "data are not generated by an LQR with unit input weight (residual "
        << report.linear_residual << ", rhs norm " << rhs.norm() << ")";
    throw Error(ErrorCode::kResidualTooLarge, msg.str());
  }
  switch (report.verdict) {
    case Verdict::kNotDetermined:
      throw Error(ErrorCode::kNotIdentifiable,
                  "data do not determine Q uniquely");
    case Verdict::kUniqueByDual:
      return recover_with_kernel(sys, bundle, report, options);
    case Verdict::kUniqueByRank:
    case Verdict::kUniqueByTerminalStates:
      break;
  }
  const Eigen::MatrixXd AD =
      build_A_matrix(sys, bundle) * duplication_matrix(sys.n());
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(AD);
  const Eigen::VectorXd q = qr.solve(rhs);
  const double residual = (AD * q - rhs).norm();
  if (residual > options.residual_rel_tol * rhs.norm()) {
    std::ostringstream msg;
    msg << "least-squares residual " << residual << " exceeds tolerance";
    throw Error(ErrorCode::kResidualTooLarge, msg.str());
  }
  return finalize(unvech(q), std::move(report), residual, Eigen::VectorXd());
}

}  // namespace ioc
