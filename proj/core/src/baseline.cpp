#include "ioc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ioc/errors.hpp"
#include "ioc/vectorization.hpp"
#include "penalized.hpp"

namespace ioc {

namespace {

// Upper-triangular R with S = R'R, accumulated episode by episode so the
// conditioning of the residual map is not squared.
Eigen::MatrixXd baseline_root(const LtiSystem& sys, const TrajectoryBundle& bundle) {
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  const Eigen::Index N = bundle.N();
  if (bundle.n() != n || bundle.m() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "bundle and system sizes differ");
  }
  if (N < 3) throw Error(ErrorCode::kInvalidArgument, "horizon N must be >= 3");

  const Eigen::Index k = vech_size(n);
  const Eigen::Index unknowns = n * (N - 2);       // lambda_2..lambda_{N-1}
  const Eigen::Index adjoint_rows = n * (N - 2);   // t = 2..N-1
  const Eigen::Index rows = adjoint_rows + m * (N - 1);
  const auto lam = [n](Eigen::Index t) { return (t - 2) * n; };

  // Shared by every episode.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, unknowns);
  for (Eigen::Index t = 2; t <= N - 1; ++t) {
    const Eigen::Index r = (t - 2) * n;
    C.block(r, lam(t), n, n) = Eigen::MatrixXd::Identity(n, n);
    if (t + 1 <= N - 1) C.block(r, lam(t + 1), n, n) = -sys.A().transpose();
  }
  for (Eigen::Index t = 1; t <= N - 2; ++t) {
    C.block(adjoint_rows + (t - 1) * m, lam(t + 1), m, n) = sys.B().transpose();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(C);
  const Eigen::MatrixXd Qc = qr.householderQ() * Eigen::MatrixXd::Identity(rows, unknowns);

  const Eigen::MatrixXd D = duplication_matrix(n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::MatrixXd H(rows, k + 1);
  Eigen::MatrixXd stacked(k + 1 + rows, k + 1);
  for (const Episode& e : bundle.episodes()) {
    H.setZero();
    for (Eigen::Index t = 2; t <= N - 1; ++t) {
      // Q y_t = (y_t' (x) I) D vech(Q)
      H.block((t - 2) * n, 0, n, k) = -kron(e.x.col(t - 1).transpose(), I) * D;
    }
    for (Eigen::Index t = 1; t <= N - 1; ++t) {
      H.block(adjoint_rows + (t - 1) * m, k, m, 1) = e.u.col(t - 1);
    }
    // Residual after the best adjoints: the part of H outside range(C).
    stacked.topRows(k + 1) = R;
    stacked.bottomRows(rows) = H - Qc * (Qc.transpose() * H);
    const Eigen::HouseholderQR<Eigen::MatrixXd> step(stacked);
    R = step.matrixQR().topRows(k + 1).triangularView<Eigen::Upper>();
  }
  return R;
}

}  // namespace

Eigen::MatrixXd baseline_normal_matrix(const LtiSystem& sys,
                                       const TrajectoryBundle& bundle) {
  const Eigen::MatrixXd R = baseline_root(sys, bundle);
  return R.transpose() * R;
}

double scaled_relative_error(const Eigen::MatrixXd& Q_hat, const Eigen::MatrixXd& Q_bar) {
  const double denom = Q_hat.squaredNorm();
  const double c = denom > 0.0 ? Q_hat.cwiseProduct(Q_bar).sum() / denom : 0.0;
  return (c * Q_hat - Q_bar).norm() / Q_bar.norm();
}

BaselineResult estimate_rm(const LtiSystem& sys, const TrajectoryBundle& bundle,
                           const BaselineSettings& settings) {
  if (bundle.M() == 0) throw Error(ErrorCode::kInvalidArgument, "bundle is empty");
  const Eigen::Index n = sys.n();
  const Eigen::Index k = vech_size(n);
  const Eigen::MatrixXd R = baseline_root(sys, bundle);
  const Eigen::MatrixXd S = R.transpose() * R;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const double phi_out = std::max(settings.phi, static_cast<double>(n * n));

  BaselineResult result{CostMatrix::create(I, phi_out), 1.0, 0.0, false, false, 0, {}};
  const double s0 = S.trace();
  if (!(s0 > 0.0)) {
    result.degenerate = true;
    result.converged = true;
    return result;
  }

  // theta = theta0 + N z keeps tr(Q) = n; theta0 = (vech I, 1).
  Eigen::VectorXd theta0(k + 1);
  theta0 << vech(I), 1.0;
  Eigen::RowVectorXd trace_row = Eigen::RowVectorXd::Zero(k + 1);
  for (Eigen::Index i = 0; i < n; ++i) trace_row(vech_index(i, i, n)) = 1.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(trace_row, Eigen::ComputeFullV);
  const Eigen::MatrixXd Nb = svd.matrixV().rightCols(k);
  const Eigen::MatrixXd Rn = R / std::sqrt(s0);
  const Eigen::MatrixXd RnNb = Rn * Nb;

  const auto theta_of = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return theta0 + Nb * z;
  };
  detail::PenalizedProblem pp;
  pp.smooth = [&](const Eigen::VectorXd& z, double& value, Eigen::VectorXd* grad) {
    const Eigen::VectorXd th = theta_of(z);
    const Eigen::VectorXd r = Rn * th;
    value = r.squaredNorm();
    if (grad) *grad = 2.0 * RnNb.transpose() * r;
    return true;
  };
  pp.to_matrix = [&](const Eigen::VectorXd& z) {
    return unvech(theta_of(z).head(k));
  };
  pp.pullback = [&](const Eigen::MatrixXd& G) {
    Eigen::VectorXd gt = Eigen::VectorXd::Zero(k + 1);
    gt.head(k) = vech_gradient(G);
    return Eigen::VectorXd(Nb.transpose() * gt);
  };
  pp.epsilon = settings.epsilon;
  pp.weight = settings.penalty_weight;
  pp.max_rounds = settings.max_penalty_rounds;
  pp.phi = std::numeric_limits<double>::infinity();
  pp.optimizer = settings.optimizer;
  pp.trace_scale = s0;

  // Start from the minimizer without the PSD penalty.
  const Eigen::VectorXd z0 = (R * Nb).completeOrthogonalDecomposition().solve(-R * theta0);
  const detail::PenalizedRun run = detail::run_penalized(pp, z0);

  const Eigen::VectorXd theta = theta_of(run.x);
  Eigen::MatrixXd Q = unvech(theta.head(k));
  if (min_eigenvalue(Q) < 0.0) {
    Q = project_psd(Q);
    if (Q.trace() > 0.0) Q *= static_cast<double>(n) / Q.trace();
  }
  result.Q_hat = CostMatrix::create(Q, std::max(phi_out, Q.squaredNorm()));
  result.input_weight = theta(k);
  result.objective = (R * theta).squaredNorm();
  result.converged = run.converged;
  result.iterations = run.iterations;
  result.objective_trace = run.trace;
  return result;
}

}  // namespace ioc
