#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ioc/numerics.hpp"
#include "ioc/types.hpp"

namespace ioc {

/// Linear map from vec(Q) to the negated inputs of exact optimal data.
/// Rows are u_1..u_{N-2} of every episode (episode-major, m rows each); the
/// block for u_t is sum_{s=t+1}^{N-1} x_s' (x) B'(A')^{s-t-1}. u_{N-1} is
/// omitted because it vanishes for every Q. Requires N >= 4.
Eigen::MatrixXd build_A_matrix(const LtiSystem& sys,
                               const TrajectoryBundle& bundle);

/// -vec(u_{1:N-2}) stacked in the row order of build_A_matrix.
Eigen::VectorXd stacked_negated_inputs(const TrajectoryBundle& bundle);

struct RankReport {
  int rank = 0;
  bool full_column_rank = false;
  Eigen::VectorXd singular_values;
  /// Symmetric n x n kernel directions, orthonormal under the trace inner
  /// product. Sign: the largest-magnitude vech entry is positive.
  std::vector<Eigen::MatrixXd> kernel_basis;
};

/// AD is build_A_matrix(...) * D (columns indexed by vech(Q)).
RankReport check_rank_condition(const Eigen::MatrixXd& AD,
                                double rank_rel_tol = kDefaultRankRelTol);

/// True iff the second-last states x_{N-1} of the episodes span R^n.
/// Throws HypothesisUnmet unless N >= n + 2 and M >= n.
bool check_terminal_states(const TrajectoryBundle& bundle,
                           double rank_rel_tol = kDefaultRankRelTol);

/// kInfeasible: no PSD Phi with unit trace satisfies the constraints.
/// kUnbounded: tr(Q' Phi) < 0 is attainable, so no PSD cost fits the data.
enum class DualStatus { kConverged, kInfeasible, kUnbounded, kNotConverged };
std::string_view to_string(DualStatus status);

struct DualSolverOptions {
  int max_iters = 50000;
  double tol = 1e-9;
  /// Tikhonov weight relative to ||Q'||_F; selects the minimum-norm point of
  /// the optimal face.
  double regularization = 1e-9;
  /// Eigenvalues of Phi* below this fraction of the largest count as zero.
  double rank_rel_tol = 1e-6;
  /// The stacked basis must have sigma_min >= this * sigma_max.
  double intersection_rel_tol = 1e-6;
  /// Normalized optimal values above this * ||Q'||_F mean Phi* = 0.
  double zero_value_rel_tol = 1e-6;
};

/// Optimal point of  min tr(Q' Phi)  s.t.  tr(dQ_k Phi) = 0, Phi PSD,
/// normalized to tr(Phi) = 1 when the optimal value is zero, and the
/// non-degeneracy test of the face it defines.
struct DualCertificate {
  Eigen::MatrixXd Phi_star;
  int rank_Phi = 0;
  bool intersection_trivial = false;
  DualStatus status = DualStatus::kNotConverged;
  int iterations = 0;
  /// tr(Q' Phi) at the normalized solution.
  double objective = 0.0;
};

/// Never reports intersection_trivial when the solver did not converge.
DualCertificate dual_certificate(const Eigen::MatrixXd& Q_prime,
                                 const std::vector<Eigen::MatrixXd>& kernel_basis,
                                 const DualSolverOptions& options = {});

enum class Verdict {
  kUniqueByRank,
  kUniqueByTerminalStates,
  kUniqueByDual,
  kNotDetermined
};
std::string_view to_string(Verdict verdict);

struct IdentifiabilityReport {
  int rank_AD = 0;
  Eigen::Index rows_AD = 0;
  bool full_column_rank = false;
  std::vector<Eigen::MatrixXd> kernel_basis;
  /// Empty when the episode count or horizon is too small for the test.
  std::optional<bool> terminal_states_independent;
  std::optional<DualCertificate> dual_certificate;
  /// Minimum-norm least-squares solution of AD vech(Q) = -vec(u).
  Eigen::MatrixXd Q_prime;
  double linear_residual = 0.0;
  Verdict verdict = Verdict::kNotDetermined;

  bool identifiable() const { return verdict != Verdict::kNotDetermined; }
};

struct AssessOptions {
  double rank_rel_tol = kDefaultRankRelTol;
  /// Allowed residual of the linear system, relative to the norm of -vec(u).
  double linear_rel_tol = 1e-8;
  DualSolverOptions dual;
};

/// Full column rank, then independent second-last states, then the dual
/// certificate around the minimum-norm solution. Requires an exact bundle.
IdentifiabilityReport assess(const LtiSystem& sys, const TrajectoryBundle& bundle,
                             const AssessOptions& options = {});

}  // namespace ioc
