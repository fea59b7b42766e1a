#pragma once

// Independent reference computations. None of these reuse the library's
// algorithms for the quantity under test.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ioc/types.hpp"

namespace ioc::testing {

inline Eigen::MatrixXd random_normal(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = d(rng);
  }
  return M;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXd G = random_normal(n, n, rng);
  return 0.5 * (G + G.transpose());
}

/// Valid (A, B) with entries ~ N(0, 1/n) for A; retries until valid and
/// reasonably conditioned (cond(A) and cond of the controllability matrix
/// below 1e2), so that tests probe algorithms rather than round-off.
inline LtiSystem random_system(Eigen::Index n, Eigen::Index m, std::mt19937_64& rng) {
  const auto cond = [](const Eigen::MatrixXd& M) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const Eigen::VectorXd& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
  };
  for (;;) {
    Eigen::MatrixXd A = random_normal(n, n, rng) / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXd B = random_normal(n, m, rng);
    Eigen::MatrixXd ctrb(n, n * m);
    Eigen::MatrixXd block = B;
    for (Eigen::Index k = 0; k < n; ++k, block = A * block) ctrb.middleCols(k * m, m) = block;
    if (cond(A) > 1e2 || cond(ctrb) > 1e2) continue;
    try {
      return LtiSystem::create(std::move(A), std::move(B));
    } catch (const std::exception&) {
    }
  }
}

/// Orthogonal A and B ~ N(0, b_scale^2): trajectories neither decay nor grow,
/// so every entry of Q leaves a clear imprint on the data.
inline LtiSystem excited_system(Eigen::Index n, Eigen::Index m, std::mt19937_64& rng,
                                double b_scale = 0.5) {
  for (;;) {
    Eigen::MatrixXd A = Eigen::HouseholderQR<Eigen::MatrixXd>(random_normal(n, n, rng))
                            .householderQ();
    Eigen::MatrixXd B = b_scale * random_normal(n, m, rng);
    try {
      return LtiSystem::create(std::move(A), std::move(B));
    } catch (const std::exception&) {
    }
  }
}

/// G G' scaled into the ball ||Q||_F^2 <= phi, plus `floor` * I (also kept
/// inside the ball) so lambda_min >= floor * (scale).
inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng,
                                  double phi = 5.0, double floor = 0.0) {
  const Eigen::MatrixXd G = random_normal(n, n, rng);
  Eigen::MatrixXd Q = G * G.transpose() + floor * Eigen::MatrixXd::Identity(n, n);
  const double target = std::uniform_real_distribution<double>(0.2, 0.9)(rng) * phi;
  Q *= std::sqrt(target / Q.squaredNorm());
  return 0.5 * (Q + Q.transpose());
}

/// Truncated Taylor series sum_{k < terms} M^k / k!.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& M, int terms = 50) {
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(M.rows(), M.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < terms; ++k) {
    term = term * M / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// Column j holds -u_{1:N-2} produced by the adjoint recursion with the
/// observed states and Q = E_j (the j-th vec basis matrix). Since inputs
/// are linear in Q for fixed states, this is the matrix mapping vec(Q) to
/// -vec(u).
inline Eigen::MatrixXd brute_force_A(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     const std::vector<Eigen::MatrixXd>& states) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  const Eigen::Index N = states.front().cols();
  const Eigen::Index rows = static_cast<Eigen::Index>(states.size()) * (N - 2) * m;
  Eigen::MatrixXd out(rows, n * n);
  for (Eigen::Index j = 0; j < n * n; ++j) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
    E(j % n, j / n) = 1.0;
    Eigen::Index row = 0;
    for (const Eigen::MatrixXd& x : states) {
      // lambda[t] for t = 1..N, lambda_N = 0.
      std::vector<Eigen::VectorXd> lambda(static_cast<std::size_t>(N + 1),
                                          Eigen::VectorXd::Zero(n));
      for (Eigen::Index t = N - 1; t >= 2; --t) {
        lambda[t] = A.transpose() * lambda[t + 1] + E * x.col(t - 1);
      }
      for (Eigen::Index t = 1; t <= N - 2; ++t) {
        out.block(row, j, m, 1) = B.transpose() * lambda[t + 1];  // = -u_t
        row += m;
      }
    }
  }
  return out;
}

/// Central differences of f at x with step h.
inline Eigen::VectorXd central_difference(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// 2 x 2 unit-trace PSD matrices Phi = [[a, c], [c, 1 - a]] on a grid.
inline std::vector<Eigen::Matrix2d> unit_trace_psd_grid(int steps) {
  std::vector<Eigen::Matrix2d> out;
  for (int i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;
    const double cmax = std::sqrt(std::max(0.0, a * (1.0 - a)));
    for (int j = -steps; j <= steps; ++j) {
      const double c = cmax * static_cast<double>(j) / steps;
      Eigen::Matrix2d P;
      P << a, c, c, 1.0 - a;
      out.push_back(P);
    }
  }
  return out;
}

}  // namespace ioc::testing
