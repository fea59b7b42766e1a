#pragma once

#include <Eigen/Dense>

#include "ioc/identifiability.hpp"
#include "ioc/types.hpp"

namespace ioc {

struct KernelSearchOptions {
  /// Smoothing schedule for lambda_min, relative to ||Q'||_F.
  double epsilon_start = 1e-1;
  double epsilon_end = 1e-12;
  double epsilon_factor = 0.1;
  /// Two feasible points farther apart than this in any coefficient
  /// contradict uniqueness.
  double ambiguity_width = 1e-6;
  int max_iters_per_round = 500;
};

struct RecoveryOptions {
  AssessOptions assess;
  /// Residual of the linear system allowed relative to ||-vec(u)||.
  double residual_rel_tol = 1e-8;
  KernelSearchOptions kernel;
};

struct RecoveryResult {
  CostMatrix Q;
  IdentifiabilityReport report;
  double residual = 0.0;
  /// Eigenvalues in [-psd_tol, 0) were raised to zero.
  bool clamped = false;
  /// Kernel coefficients (empty unless the kernel route was taken).
  Eigen::VectorXd alpha;
};

/// Exact cost recovery from noiseless optimal data. Full-rank cases solve
/// the linear system by column-pivoted QR; rank-deficient cases certified
/// unique go through recover_with_kernel.
/// Throws NotIdentifiable, ResidualTooLarge or PsdViolation.
RecoveryResult recover_exact(const LtiSystem& sys, const TrajectoryBundle& bundle,
                             const RecoveryOptions& options = {});

/// Finds the coefficients alpha for which Q' + sum alpha_k dQ_k is PSD by
/// maximizing its smallest eigenvalue. Throws SolverNotConverged,
/// PsdViolation, or AmbiguousSolution if the feasible set is not a point.
RecoveryResult recover_with_kernel(const LtiSystem& sys,
                                   const TrajectoryBundle& bundle,
                                   const IdentifiabilityReport& report,
                                   const RecoveryOptions& options = {});

}  // namespace ioc
