#include "ioc/types.hpp"

#include <algorithm>
#include <sstream>

#include "ioc/errors.hpp"
#include "ioc/vectorization.hpp"

namespace ioc {

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A,
                                       const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  Eigen::MatrixXd C(n, n * m);
  Eigen::MatrixXd block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    C.middleCols(k * m, m) = block;
    block = A * block;
  }
  return C;
}

SystemChecks check_system(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          double rank_rel_tol) {
  SystemChecks checks;
  const Eigen::Index n = A.rows();
  checks.a_invertible = numerical_rank(A, rank_rel_tol) == n;
  checks.b_full_column_rank = numerical_rank(B, rank_rel_tol) == B.cols();
  checks.controllable =
      numerical_rank(controllability_matrix(A, B), rank_rel_tol) == n;
  return checks;
}

LtiSystem LtiSystem::create(Eigen::MatrixXd A, Eigen::MatrixXd B,
                            double rank_rel_tol) {
  if (A.rows() == 0 || A.rows() != A.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "A must be square and nonempty");
  }
  if (B.rows() != A.rows() || B.cols() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "B must have n rows and at least one column");
  }
  if (!A.allFinite() || !B.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "A and B must be finite");
  }
  const SystemChecks checks = check_system(A, B, rank_rel_tol);
  if (!checks.a_invertible) {
    throw InvalidSystemError(SystemDefect::kNotInvertible, "A is singular");
  }
  if (!checks.b_full_column_rank) {
    throw InvalidSystemError(SystemDefect::kRankDeficientB,
                             "B does not have full column rank");
  }
  if (!checks.controllable) {
    throw InvalidSystemError(SystemDefect::kUncontrollable,
                             "controllability matrix is rank deficient");
  }
  return LtiSystem(std::move(A), std::move(B));
}

CostMatrix CostMatrix::create(const Eigen::MatrixXd& Q, double phi) {
  if (!(phi > 0.0)) {
    throw Error(ErrorCode::kInvalidCost, "phi must be positive");
  }
  if (!Q.allFinite()) {
    throw Error(ErrorCode::kInvalidCost, "Q must be finite");
  }
  Eigen::VectorXd v = ioc::vech(Q);
  const Eigen::MatrixXd S = unvech(v);
  const double lmin = min_eigenvalue(S);
  if (lmin < -psd_tolerance(S)) {
    std::ostringstream msg;
    msg << "Q is not PSD (min eigenvalue " << lmin << ")";
    throw Error(ErrorCode::kInvalidCost, msg.str());
  }
  const double norm2 = S.squaredNorm();
  if (norm2 > phi * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "||Q||_F^2 = " << norm2 << " exceeds phi = " << phi;
    throw Error(ErrorCode::kInvalidCost, msg.str());
  }
  return CostMatrix(S.rows(), std::move(v), phi);
}

Eigen::MatrixXd CostMatrix::matrix() const { return unvech(vech_); }

std::string_view to_string(BundleKind kind) {
  switch (kind) {
    case BundleKind::kExact: return "exact";
    case BundleKind::kNoisyState: return "noisy_state";
    case BundleKind::kNoisyInput: return "noisy_input";
    case BundleKind::kNoisyBoth: return "noisy_both";
  }
  return "exact";
}

BundleKind bundle_kind_from_string(std::string_view s) {
  if (s == "exact") return BundleKind::kExact;
  if (s == "noisy_state") return BundleKind::kNoisyState;
  if (s == "noisy_input") return BundleKind::kNoisyInput;
  if (s == "noisy_both") return BundleKind::kNoisyBoth;
  throw Error(ErrorCode::kParseError, "unknown bundle kind '" + std::string(s) + "'");
}

TrajectoryBundle::TrajectoryBundle(std::vector<Episode> episodes,
                                   BundleKind kind, NoiseInfo noise)
    : episodes_(std::move(episodes)), kind_(kind), noise_(std::move(noise)) {
  if (episodes_.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "bundle has no episodes");
  }
  const Episode& first = episodes_.front();
  n_ = first.x.rows();
  N_ = first.x.cols();
  m_ = first.u.rows();
  if (n_ == 0 || m_ == 0 || N_ < 2) {
    throw Error(ErrorCode::kDimensionMismatch,
                "episodes need n >= 1, m >= 1 and N >= 2");
  }
  for (std::size_t i = 0; i < episodes_.size(); ++i) {
    const Episode& e = episodes_[i];
    if (e.x.rows() != n_ || e.x.cols() != N_ || e.u.rows() != m_ ||
        e.u.cols() != N_ - 1) {
      std::ostringstream msg;
      msg << "episode " << i << " has shape x " << e.x.rows() << "x"
          << e.x.cols() << ", u " << e.u.rows() << "x" << e.u.cols()
          << "; expected x " << n_ << "x" << N_ << ", u " << m_ << "x"
          << N_ - 1;
      throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
  }
  const auto check_len = [&](const std::vector<double>& v) {
    if (!v.empty() && v.size() != episodes_.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "realized SNR list does not match episode count");
    }
  };
  check_len(noise_.realized_snr_x);
  check_len(noise_.realized_snr_u);
}

TrajectoryBundle TrajectoryBundle::prefix(std::size_t count) const {
  if (count == 0 || count > episodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prefix size out of range");
  }
  std::vector<Episode> eps(episodes_.begin(),
                           episodes_.begin() + static_cast<std::ptrdiff_t>(count));
  NoiseInfo noise = noise_;
  if (!noise.realized_snr_x.empty()) noise.realized_snr_x.resize(count);
  if (!noise.realized_snr_u.empty()) noise.realized_snr_u.resize(count);
  return TrajectoryBundle(std::move(eps), kind_, std::move(noise));
}

Eigen::MatrixXd TrajectoryBundle::initial_states() const { return states_at(1); }

Eigen::MatrixXd TrajectoryBundle::states_at(Eigen::Index t) const {
  if (t < 1 || t > N_) {
    throw Error(ErrorCode::kInvalidArgument, "time index out of range");
  }
  Eigen::MatrixXd X(n_, static_cast<Eigen::Index>(episodes_.size()));
  for (std::size_t i = 0; i < episodes_.size(); ++i) {
    X.col(static_cast<Eigen::Index>(i)) = episodes_[i].x.col(t - 1);
  }
  return X;
}

double TrajectoryBundle::max_dynamics_residual(const LtiSystem& sys) const {
  double worst = 0.0;
  for (const Episode& e : episodes_) {
    for (Eigen::Index t = 0; t + 1 < N_; ++t) {
      const double r =
          (e.x.col(t + 1) - sys.A() * e.x.col(t) - sys.B() * e.u.col(t)).norm();
      worst = std::max(worst, r);
    }
  }
  return worst;
}

double TrajectoryBundle::dynamics_tolerance() const {
  double scale = 1.0;
  for (const Episode& e : episodes_) {
    scale = std::max(scale, e.x.cwiseAbs().maxCoeff());
  }
  return 1e-9 * scale;
}

void TrajectoryBundle::validate_against(const LtiSystem& sys) const {
  if (sys.n() != n_ || sys.m() != m_) {
    std::ostringstream msg;
    msg << "bundle has n=" << n_ << ", m=" << m_ << " but system has n="
        << sys.n() << ", m=" << sys.m();
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  if (kind_ == BundleKind::kExact) {
    const double r = max_dynamics_residual(sys);
    if (r > dynamics_tolerance()) {
      std::ostringstream msg;
      msg << "exact bundle violates dynamics (residual " << r << ")";
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

}  // namespace ioc
