#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ioc/numerics.hpp"

namespace ioc {

/// Default squared radius of the Frobenius ball holding admissible costs.
inline constexpr double kDefaultPhi = 5.0;

struct SystemChecks {
  bool a_invertible = false;
  bool b_full_column_rank = false;
  bool controllable = false;

  bool ok() const { return a_invertible && b_full_column_rank && controllable; }
};

/// [B, AB, ..., A^{n-1}B].
Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A,
                                       const Eigen::MatrixXd& B);

SystemChecks check_system(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          double rank_rel_tol = kDefaultRankRelTol);

/// Discrete-time pair x_{t+1} = A x_t + B u_t. Construction validates that A
/// is invertible, B has full column rank and (A, B) is controllable.
class LtiSystem {
 public:
  /// Throws InvalidSystemError naming the first failed check, or
  /// DimensionMismatch for non-conformable shapes.
  static LtiSystem create(Eigen::MatrixXd A, Eigen::MatrixXd B,
                          double rank_rel_tol = kDefaultRankRelTol);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }
  Eigen::Index n() const { return A_.rows(); }
  Eigen::Index m() const { return B_.cols(); }

 private:
  LtiSystem(Eigen::MatrixXd A, Eigen::MatrixXd B)
      : A_(std::move(A)), B_(std::move(B)) {}

  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
};

/// Symmetric PSD state cost confined to ||Q||_F^2 <= phi. Stored through its
/// half-vectorization; matrix() rebuilds the full symmetric view. The input
/// weight is fixed to the identity and there is no terminal cost.
class CostMatrix {
 public:
  /// Throws AsymmetricInput or InvalidCost (not PSD within psd_tolerance, or
  /// outside the ball).
  static CostMatrix create(const Eigen::MatrixXd& Q, double phi = kDefaultPhi);

  Eigen::Index n() const { return n_; }
  double phi() const { return phi_; }
  const Eigen::VectorXd& vech() const { return vech_; }
  Eigen::MatrixXd matrix() const;

 private:
  CostMatrix(Eigen::Index n, Eigen::VectorXd v, double phi)
      : n_(n), vech_(std::move(v)), phi_(phi) {}

  Eigen::Index n_;
  Eigen::VectorXd vech_;
  double phi_;
};

enum class BundleKind { kExact, kNoisyState, kNoisyInput, kNoisyBoth };

std::string_view to_string(BundleKind kind);
BundleKind bundle_kind_from_string(std::string_view s);

/// One trajectory: x is n x N (columns x_1..x_N), u is m x (N-1).
/// For noisy bundles x_1 stays exact and columns 2..N hold observations y_t;
/// u holds the observed inputs mu_t.
struct Episode {
  Eigen::MatrixXd x;
  Eigen::MatrixXd u;
};

struct NoiseInfo {
  std::optional<double> snr_db_x;
  std::optional<double> snr_db_u;
  /// Realized per-episode SNR in dB (empty when that channel is noiseless).
  std::vector<double> realized_snr_x;
  std::vector<double> realized_snr_u;
};

class TrajectoryBundle {
 public:
  TrajectoryBundle() = default;

  /// Throws DimensionMismatch unless all episodes share n, m and N (N >= 2).
  explicit TrajectoryBundle(std::vector<Episode> episodes,
                            BundleKind kind = BundleKind::kExact,
                            NoiseInfo noise = {});

  const std::vector<Episode>& episodes() const { return episodes_; }
  const Episode& episode(std::size_t i) const { return episodes_.at(i); }
  std::size_t M() const { return episodes_.size(); }
  Eigen::Index N() const { return N_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }
  BundleKind kind() const { return kind_; }
  const NoiseInfo& noise() const { return noise_; }

  bool has_noisy_states() const {
    return kind_ == BundleKind::kNoisyState || kind_ == BundleKind::kNoisyBoth;
  }
  bool has_noisy_inputs() const {
    return kind_ == BundleKind::kNoisyInput || kind_ == BundleKind::kNoisyBoth;
  }

  /// First `count` episodes, keeping noise metadata aligned.
  TrajectoryBundle prefix(std::size_t count) const;

  /// n x M matrix of initial states.
  Eigen::MatrixXd initial_states() const;

  /// n x M matrix of the states at time t (1-based).
  Eigen::MatrixXd states_at(Eigen::Index t) const;

  /// max over episodes and t of ||x_{t+1} - A x_t - B u_t||.
  double max_dynamics_residual(const LtiSystem& sys) const;

  /// Tolerance for the exact-dynamics invariant, relative to the data scale.
  double dynamics_tolerance() const;

  /// Throws DimensionMismatch if the system does not match, or
  /// InvalidArgument if an exact bundle violates the dynamics.
  void validate_against(const LtiSystem& sys) const;

 private:
  std::vector<Episode> episodes_;
  Eigen::Index N_ = 0;
  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  BundleKind kind_ = BundleKind::kExact;
  NoiseInfo noise_;
};

}  // namespace ioc
