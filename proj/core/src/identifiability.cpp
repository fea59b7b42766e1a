#include "ioc/identifiability.hpp"

#include <algorithm>
#include <cmath>

#include "ioc/errors.hpp"
#include "ioc/vectorization.hpp"

namespace ioc {

namespace {

void require_exact_bundle(const TrajectoryBundle& bundle) {
  if (bundle.kind() != BundleKind::kExact) {
    throw Error(ErrorCode::kInvalidArgument,
                "identifiability analysis requires an exact bundle");
  }
  if (bundle.N() < 4) {
    throw Error(ErrorCode::kInvalidArgument, "horizon N must be >= 4");
  }
}

// Frobenius weight of each vech coordinate: 1 on the diagonal, 2 off it.
Eigen::VectorXd vech_weights(Eigen::Index n) {
  Eigen::VectorXd w(vech_size(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) w(vech_index(i, j, n)) = i == j ? 1.0 : 2.0;
  }
  return w;
}

Eigen::MatrixXd fix_sign(Eigen::MatrixXd dq) {
  const Eigen::VectorXd v = vech(dq);
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) dq = -dq;
  return dq;
}

// Orthonormal basis (in vec coordinates) of {G2 W G2' : W symmetric}.
Eigen::MatrixXd face_basis(const Eigen::MatrixXd& G2) {
  const Eigen::Index n = G2.rows();
  const Eigen::Index k = G2.cols();
  Eigen::MatrixXd basis(n * n, vech_size(k));
  Eigen::Index col = 0;
  for (Eigen::Index b = 0; b < k; ++b) {
    for (Eigen::Index a = b; a < k; ++a) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(k, k);
      E(a, b) = 1.0;
      E(b, a) = 1.0;
      const Eigen::MatrixXd S = G2 * E * G2.transpose();
      basis.col(col++) = vec(S) / S.norm();
    }
  }
  return basis;
}

}  // namespace

Eigen::MatrixXd build_A_matrix(const LtiSystem& sys,
                               const TrajectoryBundle& bundle) {
  require_exact_bundle(bundle);
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  if (bundle.n() != n || bundle.m() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "bundle and system sizes differ");
  }
  const Eigen::Index N = bundle.N();

  // C[k] = B'(A')^k, k = 0..N-3.
  std::vector<Eigen::MatrixXd> C(N - 2);
  C[0] = sys.B().transpose();
  for (Eigen::Index k = 1; k < N - 2; ++k) C[k] = C[k - 1] * sys.A().transpose();

  const Eigen::Index rows_per_episode = (N - 2) * m;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(bundle.M()) * rows_per_episode, n * n);
  for (std::size_t i = 0; i < bundle.M(); ++i) {
    const Eigen::MatrixXd& x = bundle.episode(i).x;
    const Eigen::Index base = static_cast<Eigen::Index>(i) * rows_per_episode;
    // 1-based t = 1..N-2, s = t+1..N-1; x_s is column s-1.
    for (Eigen::Index t = 1; t <= N - 2; ++t) {
      auto block = out.block(base + (t - 1) * m, 0, m, n * n);
      for (Eigen::Index s = t + 1; s <= N - 1; ++s) {
        block += kron(x.col(s - 1).transpose(), C[s - t - 1]);
      }
    }
  }
  return out;
}

Eigen::VectorXd stacked_negated_inputs(const TrajectoryBundle& bundle) {
  const Eigen::Index N = bundle.N();
  const Eigen::Index m = bundle.m();
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(bundle.M()) * (N - 2) * m);
  Eigen::Index row = 0;
  for (const Episode& e : bundle.episodes()) {
    for (Eigen::Index t = 0; t < N - 2; ++t) {
      rhs.segment(row, m) = -e.u.col(t);
      row += m;
    }
  }
  return rhs;
}

RankReport check_rank_condition(const Eigen::MatrixXd& AD, double rank_rel_tol) {
  const Eigen::Index cols = AD.cols();
  const Eigen::Index n = dim_from_vech_size(cols);
  RankReport report;
  Eigen::MatrixXd V;
  if (AD.rows() > 0) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(AD, Eigen::ComputeFullV);
    report.singular_values = svd.singularValues();
    V = svd.matrixV();
    const double smax = report.singular_values.size() ? report.singular_values(0) : 0.0;
    const double thr = rank_threshold(AD.rows(), AD.cols(), smax, rank_rel_tol);
    for (Eigen::Index i = 0; i < report.singular_values.size(); ++i) {
      if (smax > 0.0 && report.singular_values(i) > thr) ++report.rank;
    }
  } else {
    V = Eigen::MatrixXd::Identity(cols, cols);
  }
  report.full_column_rank = report.rank == cols;
  const Eigen::Index eta = cols - report.rank;
  if (eta == 0) return report;

  // Re-orthonormalize the kernel under the trace inner product.
  const Eigen::VectorXd sqrt_w = vech_weights(n).cwiseSqrt();
  const Eigen::MatrixXd K = sqrt_w.asDiagonal() * V.rightCols(eta);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
  const Eigen::MatrixXd Qk =
      qr.householderQ() * Eigen::MatrixXd::Identity(K.rows(), eta);
  for (Eigen::Index k = 0; k < eta; ++k) {
    const Eigen::VectorXd v = Qk.col(k).cwiseQuotient(sqrt_w);
    report.kernel_basis.push_back(fix_sign(unvech(v)));
  }
  return report;
}

bool check_terminal_states(const TrajectoryBundle& bundle, double rank_rel_tol) {
  const Eigen::Index n = bundle.n();
  if (bundle.N() < n + 2 || static_cast<Eigen::Index>(bundle.M()) < n) {
    throw Error(ErrorCode::kHypothesisUnmet,
                "terminal-state test needs N >= n + 2 and M >= n");
  }
  return numerical_rank(bundle.states_at(bundle.N() - 1), rank_rel_tol) == n;
}

std::string_view to_string(DualStatus status) {
  switch (status) {
    case DualStatus::kConverged: return "converged";
    case DualStatus::kInfeasible: return "infeasible";
    case DualStatus::kUnbounded: return "unbounded";
    case DualStatus::kNotConverged: return "not_converged";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kUniqueByRank: return "unique_by_rank";
    case Verdict::kUniqueByTerminalStates: return "unique_by_terminal_states";
    case Verdict::kUniqueByDual: return "unique_by_dual";
    case Verdict::kNotDetermined: return "not_determined";
  }
  return "unknown";
}

DualCertificate dual_certificate(const Eigen::MatrixXd& Q_prime,
                                 const std::vector<Eigen::MatrixXd>& kernel_basis,
                                 const DualSolverOptions& options) {
  if (kernel_basis.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "kernel basis must be nonempty");
  }
  const Eigen::Index n = Q_prime.rows();
  const Eigen::Index eta = static_cast<Eigen::Index>(kernel_basis.size());
  const Eigen::MatrixXd C = symmetrize(Q_prime);
  const double scale = C.norm() > 0.0 ? C.norm() : 1.0;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

  // Rows: vec(dQ_k)', then vec(I)' for the unit-trace normalization.
  Eigen::MatrixXd Mc(eta + 1, n * n);
  for (Eigen::Index k = 0; k < eta; ++k) {
    if (kernel_basis[k].rows() != n || kernel_basis[k].cols() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "kernel matrices must be n x n");
    }
    Mc.row(k) = vec(symmetrize(kernel_basis[k])).transpose();
  }
  Mc.row(eta) = vec(I).transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(eta + 1);
  b(eta) = 1.0;

  DualCertificate cert;
  cert.Phi_star = Eigen::MatrixXd::Zero(n, n);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> span_qr(
      Mc.topRows(eta).transpose());
  const Eigen::VectorXd vec_I = vec(I);
  const Eigen::VectorXd I_resid =
      vec_I - Mc.topRows(eta).transpose() * span_qr.solve(vec_I);
  const bool normalizable = I_resid.norm() > 1e-9 * std::sqrt(static_cast<double>(n));

  if (!normalizable) {
    // tr(Phi) is a combination of the constraints, so Phi* = 0.
    cert.status = DualStatus::kInfeasible;
  } else {
    const Eigen::LDLT<Eigen::MatrixXd> gram(Mc * Mc.transpose());
    const auto project_affine = [&](const Eigen::MatrixXd& X) {
      const Eigen::VectorXd x = vec(X);
      const Eigen::VectorXd mult = gram.solve(Mc * x - b);
      return symmetrize(unvec(x - Mc.transpose() * mult, n, n));
    };

    const double rho = options.regularization * scale;
    const double sigma = scale;
    Eigen::MatrixXd Y = I / static_cast<double>(n);
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n);
    cert.status = DualStatus::kNotConverged;
    for (int it = 1; it <= options.max_iters; ++it) {
      const Eigen::MatrixXd X = project_affine((sigma * (Y - U) - C) / (rho + sigma));
      const Eigen::MatrixXd Y_old = Y;
      Y = project_psd(X + U);
      U += X - Y;
      cert.iterations = it;
      const double primal = (X - Y).norm();
      const double dual = sigma * (Y - Y_old).norm();
      if (primal < options.tol && dual < options.tol * scale) {
        cert.status = DualStatus::kConverged;
        break;
      }
    }
    cert.objective = (C.cwiseProduct(Y)).sum();
    if (cert.status == DualStatus::kConverged) {
      if (cert.objective < -options.zero_value_rel_tol * scale) {
        cert.status = DualStatus::kUnbounded;
        cert.Phi_star = Y;
      } else if (cert.objective <= options.zero_value_rel_tol * scale) {
        cert.Phi_star = Y;
      }
      // Otherwise every feasible direction has positive value and Phi* = 0.
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(cert.Phi_star));
  const Eigen::VectorXd& evals = eig.eigenvalues();
  const double emax = evals.size() ? evals.maxCoeff() : 0.0;
  cert.rank_Phi = 0;
  if (emax > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (evals(i) > options.rank_rel_tol * emax) ++cert.rank_Phi;
    }
  }

  if (cert.status != DualStatus::kConverged &&
      cert.status != DualStatus::kInfeasible) {
    cert.intersection_trivial = false;
    return cert;
  }

  const Eigen::Index free_dim = n - cert.rank_Phi;
  const Eigen::Index face_dim = vech_size(free_dim);
  if (face_dim + eta > vech_size(n)) {
    cert.intersection_trivial = false;
    return cert;
  }
  Eigen::MatrixXd stacked(n * n, face_dim + eta);
  if (face_dim > 0) {
    // Eigenvalues ascend, so the null directions come first.
    stacked.leftCols(face_dim) = face_basis(eig.eigenvectors().leftCols(free_dim));
  }
  for (Eigen::Index k = 0; k < eta; ++k) {
    stacked.col(face_dim + k) = Mc.row(k).transpose().normalized();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const Eigen::VectorXd& s = svd.singularValues();
  cert.intersection_trivial =
      s.size() > 0 && s(s.size() - 1) >= options.intersection_rel_tol * s(0);
  return cert;
}

IdentifiabilityReport assess(const LtiSystem& sys, const TrajectoryBundle& bundle,
                             const AssessOptions& options) {
  bundle.validate_against(sys);
  const Eigen::Index n = sys.n();
  const Eigen::MatrixXd AD = build_A_matrix(sys, bundle) * duplication_matrix(n);
  const Eigen::VectorXd rhs = stacked_negated_inputs(bundle);

  IdentifiabilityReport report;
  report.rows_AD = AD.rows();
  RankReport rank = check_rank_condition(AD, options.rank_rel_tol);
  report.rank_AD = rank.rank;
  report.full_column_rank = rank.full_column_rank;
  report.kernel_basis = std::move(rank.kernel_basis);

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(AD);
  const Eigen::VectorXd q = cod.solve(rhs);
  report.Q_prime = unvech(q);
  report.linear_residual = (AD * q - rhs).norm();

  if (bundle.N() >= n + 2 && static_cast<Eigen::Index>(bundle.M()) >= n) {
    report.terminal_states_independent =
        check_terminal_states(bundle, options.rank_rel_tol);
  }

  if (report.linear_residual > options.linear_rel_tol * rhs.norm()) {
    report.verdict = Verdict::kNotDetermined;
  } else if (report.full_column_rank) {
    report.verdict = Verdict::kUniqueByRank;
  } else if (report.terminal_states_independent.value_or(false)) {
    report.verdict = Verdict::kUniqueByTerminalStates;
  } else {
    report.dual_certificate =
        dual_certificate(report.Q_prime, report.kernel_basis, options.dual);
    const DualCertificate& c = *report.dual_certificate;
    report.verdict = c.status == DualStatus::kConverged && c.intersection_trivial
                         ? Verdict::kUniqueByDual
                         : Verdict::kNotDetermined;
  }
  return report;
}

}  // namespace ioc
