#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "ioc/types.hpp"

namespace ioc {

struct InputReconstruction {
  Eigen::MatrixXd u;                ///< m x (N-1)
  Eigen::VectorXd residual_norms;   ///< ||x_{t+1} - A x_t - B u_t|| per t
  double max_residual = 0.0;
};

/// Least-squares inputs u_t = (B'B)^{-1} B'(x_{t+1} - A x_t). The residual
/// is returned, never hidden, so non-dynamical data stays visible.
InputReconstruction inputs_from_states(const LtiSystem& sys,
                                       const Eigen::MatrixXd& x);

using InitialStateSampler = std::function<Eigen::VectorXd(std::mt19937_64&)>;

/// Independent U[lo, hi] entries.
InitialStateSampler uniform_initial_states(Eigen::Index n, double lo = -5.0,
                                           double hi = 5.0);

/// M exact optimal episodes. Episode i draws its initial state from its own
/// stream derive_seed(seed, i), so the first k episodes do not depend on M.
TrajectoryBundle generate_bundle(const LtiSystem& sys, const CostMatrix& Q,
                                 Eigen::Index N, std::size_t M,
                                 const InitialStateSampler& sampler,
                                 std::uint64_t seed);

/// Adds zero-mean white Gaussian noise to x_2..x_N and to u_1..u_{N-1}.
/// The variance is chosen per episode so that 10 log10(P_signal / sigma^2)
/// equals the requested dB, with P_signal the mean square over all noisy
/// entries of that episode. x_1 is never perturbed. std::nullopt leaves a
/// channel untouched.
TrajectoryBundle add_noise(const TrajectoryBundle& bundle,
                           std::optional<double> snr_db_x,
                           std::optional<double> snr_db_u, std::uint64_t seed);

/// 10 log10(mean(signal^2) / mean(noise^2)); +inf for zero noise.
double realized_snr_db(const Eigen::MatrixXd& signal,
                       const Eigen::MatrixXd& noise);

}  // namespace ioc
