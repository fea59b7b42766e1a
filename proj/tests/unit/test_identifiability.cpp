#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ioc/errors.hpp"
#include "ioc/forward_lqr.hpp"
#include "ioc/identifiability.hpp"
#include "ioc/numerics.hpp"
#include "ioc/trajectories.hpp"
#include "ioc/vectorization.hpp"
#include "support/oracles.hpp"
#include "support/three_state_example.hpp"

namespace ioc {
namespace {

TrajectoryBundle example_bundle() {
  const LtiSystem sys = LtiSystem::create(testing::example_A(), testing::example_B());
  const CostMatrix Q = CostMatrix::create(testing::example_Q_bar());
  return TrajectoryBundle({simulate(sys, solve_riccati(sys, Q, testing::kExampleN),
                                    testing::example_x0())});
}

TrajectoryBundle bundle_from_states(const LtiSystem& sys, const Eigen::MatrixXd& Q,
                                    Eigen::Index N, const Eigen::MatrixXd& x0s) {
  const GainSchedule gains = solve_riccati(sys, Q, N);
  std::vector<Episode> eps;
  for (Eigen::Index i = 0; i < x0s.cols(); ++i) eps.push_back(simulate(sys, gains, x0s.col(i)));
  return TrajectoryBundle(std::move(eps));
}

TEST(BuildA, ScalarHandExpansion) {
  const double a = 1.7;
  const double b = 0.6;
  const LtiSystem sys = LtiSystem::create(Eigen::MatrixXd::Constant(1, 1, a),
                                          Eigen::MatrixXd::Constant(1, 1, b));
  const TrajectoryBundle bundle =
      bundle_from_states(sys, Eigen::MatrixXd::Constant(1, 1, 0.8), 4,
                         Eigen::MatrixXd::Constant(1, 1, 2.0));
  const double x2 = bundle.episode(0).x(0, 1);
  const double x3 = bundle.episode(0).x(0, 2);
  const Eigen::MatrixXd A = build_A_matrix(sys, bundle);
  ASSERT_EQ(A.rows(), 2);
  ASSERT_EQ(A.cols(), 1);
  EXPECT_NEAR(A(0, 0), b * x2 + a * b * x3, 1e-14);
  EXPECT_NEAR(A(1, 0), b * x3, 1e-14);
}

TEST(BuildA, ZeroStatesGiveZeroMatrix) {
  std::mt19937_64 rng(1);
  const LtiSystem sys = testing::random_system(2, 1, rng);
  const TrajectoryBundle bundle =
      bundle_from_states(sys, Eigen::MatrixXd::Identity(2, 2), 6, Eigen::MatrixXd::Zero(2, 2));
  EXPECT_EQ(build_A_matrix(sys, bundle), Eigen::MatrixXd::Zero(2 * 4, 4));
}

TEST(BuildA, RejectsShortHorizonAndNoisyData) {
  std::mt19937_64 rng(2);
  const LtiSystem sys = testing::random_system(2, 1, rng);
  const CostMatrix Q = CostMatrix::create(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(build_A_matrix(sys, generate_bundle(sys, Q, 3, 2, uniform_initial_states(2), 1)),
               Error);
  const TrajectoryBundle noisy =
      add_noise(generate_bundle(sys, Q, 6, 2, uniform_initial_states(2), 1), 20.0, 20.0, 2);
  EXPECT_THROW(build_A_matrix(sys, noisy), Error);
}

TEST(BuildA, MatchesAdjointBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    const Eigen::Index m = 1 + trial % static_cast<int>(n);
    const LtiSystem sys = testing::random_system(n, m, rng);
    const CostMatrix Q = CostMatrix::create(testing::random_psd(n, rng));
    const TrajectoryBundle bundle =
        generate_bundle(sys, Q, 4 + trial % 5, 1 + trial % 3, uniform_initial_states(n), trial);
    std::vector<Eigen::MatrixXd> states;
    for (const Episode& ep : bundle.episodes()) states.push_back(ep.x);
    const Eigen::MatrixXd A = build_A_matrix(sys, bundle);
    EXPECT_LE((A - testing::brute_force_A(sys.A(), sys.B(), states)).cwiseAbs().maxCoeff(),
              1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff()));
    // The linear system is satisfied by the generating cost.
    const Eigen::VectorXd rhs = stacked_negated_inputs(bundle);
    const Eigen::VectorXd lhs = A * duplication_matrix(n) * Q.vech();
    EXPECT_LE((lhs - rhs).norm(), 1e-8 * std::max(1.0, rhs.norm())) << trial;
  }
}

TEST(RankCondition, FullRankHasEmptyKernel) {
  std::mt19937_64 rng(4);
  const RankReport r = check_rank_condition(testing::random_normal(10, 6, rng));
  EXPECT_TRUE(r.full_column_rank);
  EXPECT_EQ(r.rank, 6);
  EXPECT_TRUE(r.kernel_basis.empty());
}

TEST(RankCondition, KernelIsOrthonormalAndAnnihilated) {
  std::mt19937_64 rng(5);
  // Rank 3 map on vech coordinates of 3 x 3 matrices.
  const Eigen::MatrixXd AD = testing::random_normal(8, 3, rng) * testing::random_normal(3, 6, rng);
  const RankReport r = check_rank_condition(AD);
  EXPECT_EQ(r.rank, 3);
  ASSERT_EQ(r.kernel_basis.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.kernel_basis[i], r.kernel_basis[i].transpose());
    EXPECT_LE((AD * vech(r.kernel_basis[i])).norm(), 1e-8 * AD.norm());
    for (std::size_t j = 0; j < 3; ++j) {
      const double ip = r.kernel_basis[i].cwiseProduct(r.kernel_basis[j]).sum();
      EXPECT_NEAR(ip, i == j ? 1.0 : 0.0, 1e-12);
    }
    Eigen::Index k = 0;
    vech(r.kernel_basis[i]).cwiseAbs().maxCoeff(&k);
    EXPECT_GT(vech(r.kernel_basis[i])(k), 0.0);
  }
}

TEST(RankCondition, ExampleHasOneKernelDirection) {
  const LtiSystem sys = LtiSystem::create(testing::example_A(), testing::example_B());
  const TrajectoryBundle bundle = example_bundle();
  const RankReport r = check_rank_condition(build_A_matrix(sys, bundle) * duplication_matrix(3));
  EXPECT_EQ(r.rank, 5);
  ASSERT_EQ(r.kernel_basis.size(), 1u);
  const Eigen::MatrixXd reference = testing::example_delta_Q();
  const double cosine =
      r.kernel_basis[0].cwiseProduct(reference).sum() / (r.kernel_basis[0].norm() * reference.norm());
  EXPECT_GE(std::abs(cosine), 0.999);
}

TEST(RankCondition, SecondEpisodeRestoresFullRank) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const LtiSystem sys = testing::random_system(2, 1, rng);
    const Eigen::MatrixXd Q = testing::random_psd(2, rng);
    const Eigen::MatrixXd x0 = testing::random_normal(2, 2, rng);
    const TrajectoryBundle both = bundle_from_states(sys, Q, 4, x0);
    const RankReport r = check_rank_condition(build_A_matrix(sys, both) * duplication_matrix(2));
    EXPECT_TRUE(r.full_column_rank) << trial;
  }
}

TEST(TerminalStates, HypothesesAreReported) {
  std::mt19937_64 rng(7);
  const LtiSystem sys = testing::random_system(3, 1, rng);
  const CostMatrix Q = CostMatrix::create(Eigen::MatrixXd::Identity(3, 3));
  try {
    check_terminal_states(generate_bundle(sys, Q, 4, 3, uniform_initial_states(3), 1));
    FAIL() << "short horizon accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHypothesisUnmet);
  }
  try {
    check_terminal_states(generate_bundle(sys, Q, 6, 2, uniform_initial_states(3), 1));
    FAIL() << "too few episodes accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHypothesisUnmet);
  }
}

TEST(TerminalStates, SharedInitialStateIsCollinear) {
  std::mt19937_64 rng(8);
  const LtiSystem sys = testing::random_system(3, 1, rng);
  const Eigen::VectorXd x0 = testing::random_normal(3, 1, rng);
  const TrajectoryBundle bundle =
      bundle_from_states(sys, testing::random_psd(3, rng), 6, x0.replicate(1, 4));
  EXPECT_FALSE(check_terminal_states(bundle));
}

TEST(TerminalStates, StandardBasisIsIndependent) {
  // Episodes of length n+2 whose second-last states are e_1..e_n.
  const Eigen::Index n = 3;
  std::mt19937_64 rng(9);
  std::vector<Episode> eps;
  for (Eigen::Index i = 0; i < n; ++i) {
    Episode ep{testing::random_normal(n, n + 2, rng), testing::random_normal(1, n + 1, rng)};
    ep.x.col(n) = Eigen::VectorXd::Unit(n, i);
    eps.push_back(ep);
  }
  EXPECT_TRUE(check_terminal_states(TrajectoryBundle(eps, BundleKind::kNoisyState)));
}

TEST(TerminalStates, IndependenceImpliesFullRank) {
  std::mt19937_64 rng(10);
  int independent = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const LtiSystem sys = testing::random_system(n, 1, rng);
    const CostMatrix Q = CostMatrix::create(testing::random_psd(n, rng));
    const TrajectoryBundle bundle =
        generate_bundle(sys, Q, n + 2, n, uniform_initial_states(n), trial);
    if (check_terminal_states(bundle)) {
      ++independent;
      const RankReport r =
          check_rank_condition(build_A_matrix(sys, bundle) * duplication_matrix(n));
      EXPECT_TRUE(r.full_column_rank) << trial;
    }
  }
  EXPECT_EQ(independent, 50);
}

TEST(DualCertificate, IdentityKernelIsInfeasible) {
  for (Eigen::Index n = 1; n <= 4; ++n) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const DualCertificate c = dual_certificate(I, {I / std::sqrt(static_cast<double>(n))});
    EXPECT_EQ(c.status, DualStatus::kInfeasible);
    EXPECT_EQ(c.rank_Phi, 0);
    EXPECT_EQ(c.Phi_star, Eigen::MatrixXd::Zero(n, n));
    EXPECT_FALSE(c.intersection_trivial);
  }
}

TEST(DualCertificate, UniqueToyInstance) {
  // e1 e1' + beta offdiag is PSD only at beta = 0.
  Eigen::MatrixXd Qp = Eigen::MatrixXd::Zero(2, 2);
  Qp(0, 0) = 1.0;
  Eigen::MatrixXd dQ(2, 2);
  dQ << 0, 1, 1, 0;
  dQ /= std::sqrt(2.0);
  const DualCertificate c = dual_certificate(Qp, {dQ});
  EXPECT_EQ(c.status, DualStatus::kConverged);
  EXPECT_EQ(c.rank_Phi, 1);
  EXPECT_TRUE(c.intersection_trivial);
  EXPECT_NEAR(c.Phi_star(1, 1), 1.0, 1e-6);
}

TEST(DualCertificate, NoFalseCertificateWhenSolutionsAreARay) {
  // diag(1, 0) + beta diag(0, 1) is PSD for every beta >= 0.
  Eigen::MatrixXd Qp = Eigen::MatrixXd::Zero(2, 2);
  Qp(0, 0) = 1.0;
  Eigen::MatrixXd dQ = Eigen::MatrixXd::Zero(2, 2);
  dQ(1, 1) = 1.0;
  const DualCertificate c = dual_certificate(Qp, {dQ});
  EXPECT_EQ(c.rank_Phi, 0);
  EXPECT_FALSE(c.intersection_trivial);
}

TEST(DualCertificate, UnboundedWhenNoPsdMemberExists) {
  Eigen::MatrixXd Qp(2, 2);
  Qp << 1, 0, 0, -1;
  Eigen::MatrixXd dQ(2, 2);
  dQ << 0, 1, 1, 0;
  dQ /= std::sqrt(2.0);
  const DualCertificate c = dual_certificate(Qp, {dQ});
  EXPECT_EQ(c.status, DualStatus::kUnbounded);
  EXPECT_FALSE(c.intersection_trivial);
}

// Exhaustive search over unit-trace 2 x 2 PSD matrices [[a, c], [c, 1 - a]]:
// the constraint fixes c as a function of a, leaving a one-dimensional sweep.
double grid_dual_value(const Eigen::Matrix2d& Qp, const Eigen::Matrix2d& dQ, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;
    const double c = -(dQ(0, 0) * a + dQ(1, 1) * (1.0 - a)) / (2.0 * dQ(0, 1));
    if (c * c > a * (1.0 - a)) continue;
    Eigen::Matrix2d P;
    P << a, c, c, 1.0 - a;
    best = std::min(best, Qp.cwiseProduct(P).sum());
  }
  return best;
}

TEST(DualCertificate, ObjectiveMatchesGridOracle) {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 40 && compared < 10; ++trial) {
    Eigen::Matrix2d dQ = testing::random_symmetric(2, rng);
    dQ /= dQ.norm();
    const Eigen::Matrix2d Qp = testing::random_symmetric(2, rng);
    const double grid = grid_dual_value(Qp, dQ, 200000);
    if (!std::isfinite(grid) || std::abs(dQ(0, 1)) < 0.1) continue;
    DualSolverOptions opts;
    // Report the value whatever its sign; the grid oracle has no sign rule.
    opts.zero_value_rel_tol = std::numeric_limits<double>::infinity();
    const DualCertificate c = dual_certificate(Qp, {dQ}, opts);
    ASSERT_EQ(c.status, DualStatus::kConverged) << trial;
    EXPECT_NEAR(c.objective, grid, 1e-4 * std::max(1.0, std::abs(grid))) << trial;
    EXPECT_LE(c.objective, grid + 1e-8);
    ++compared;
  }
  EXPECT_EQ(compared, 10);
}

TEST(DualCertificate, ExampleHasRankTwoAndTrivialIntersection) {
  const LtiSystem sys = LtiSystem::create(testing::example_A(), testing::example_B());
  const IdentifiabilityReport report = assess(sys, example_bundle());
  ASSERT_TRUE(report.dual_certificate.has_value());
  EXPECT_EQ(report.dual_certificate->status, DualStatus::kConverged);
  EXPECT_EQ(report.dual_certificate->rank_Phi, 2);
  EXPECT_TRUE(report.dual_certificate->intersection_trivial);
  EXPECT_EQ(report.verdict, Verdict::kUniqueByDual);
  // Phi* lies in the optimal face: its range is orthogonal to Q_bar's.
  const Eigen::MatrixXd& Phi = report.dual_certificate->Phi_star;
  EXPECT_LE((Phi * testing::example_Q_bar()).norm(), 1e-6 * Phi.norm());
}

TEST(Assess, Verdicts) {
  std::mt19937_64 rng(12);
  const LtiSystem sys = testing::random_system(3, 1, rng);
  const CostMatrix Q = CostMatrix::create(testing::random_psd(3, rng));
  const IdentifiabilityReport rich =
      assess(sys, generate_bundle(sys, Q, 8, 3, uniform_initial_states(3), 1));
  EXPECT_EQ(rich.verdict, Verdict::kUniqueByRank);
  EXPECT_TRUE(rich.kernel_basis.empty());
  EXPECT_LE(rich.linear_residual, 1e-8 * std::max(1.0, Q.matrix().norm()));

  const IdentifiabilityReport tiny =
      assess(sys, generate_bundle(sys, Q, 4, 1, uniform_initial_states(3), 1));
  EXPECT_EQ(tiny.verdict, Verdict::kNotDetermined);
  EXPECT_FALSE(tiny.identifiable());
  EXPECT_LE(tiny.rank_AD, 2);
  EXPECT_EQ(tiny.kernel_basis.size(), static_cast<std::size_t>(6 - tiny.rank_AD));
}

TEST(Assess, ExampleIsUniqueByDual) {
  const LtiSystem sys = LtiSystem::create(testing::example_A(), testing::example_B());
  const IdentifiabilityReport report = assess(sys, example_bundle());
  EXPECT_EQ(report.rank_AD, 5);
  EXPECT_EQ(report.rows_AD, 13);
  EXPECT_EQ(to_string(report.verdict), "unique_by_dual");
}

}  // namespace
}  // namespace ioc
