#include <benchmark/benchmark.h>

#include <random>

#include "ioc/forward_lqr.hpp"
#include "ioc/identifiability.hpp"
#include "ioc/noisy.hpp"
#include "ioc/pmp.hpp"
#include "ioc/trajectories.hpp"

namespace {

using namespace ioc;

// Orthogonal A keeps trajectories from collapsing, so timings reflect
// well-conditioned work rather than early exits.
LtiSystem bench_system(Eigen::Index n, Eigen::Index m) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = g(rng);
  const Eigen::MatrixXd A = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
  Eigen::MatrixXd B(n, m);
  for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = 0.5 * g(rng);
  return LtiSystem::create(A, B);
}

CostMatrix bench_cost(Eigen::Index n) {
  const Eigen::MatrixXd L = Eigen::MatrixXd::Random(n, n) / static_cast<double>(n);
  return CostMatrix::create(L * L.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n));
}

void BM_Riccati(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const LtiSystem sys = bench_system(n, 1);
  const CostMatrix Q = bench_cost(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_riccati(sys, Q, 50));
}
BENCHMARK(BM_Riccati)->Arg(2)->Arg(4)->Arg(8);

void BM_PmpSolve(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const LtiSystem sys = bench_system(n, 1);
  const PmpSystem pmp = build_pmp_system(sys, bench_cost(n).matrix(), 50);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(pmp_solve(pmp, x0));
}
BENCHMARK(BM_PmpSolve)->Arg(2)->Arg(4)->Arg(8);

void BM_RiskGradient(benchmark::State& state) {
  const Eigen::Index n = 2;
  const auto M = static_cast<std::size_t>(state.range(0));
  const LtiSystem sys = bench_system(n, 1);
  const TrajectoryBundle bundle =
      generate_bundle(sys, bench_cost(n), 50, M, uniform_initial_states(n), 7);
  const RiskProblem problem(sys, bundle, RiskMode::kStateObs, RiskSettings{});
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(eval_risk_and_gradient(problem, Q));
}
BENCHMARK(BM_RiskGradient)->Arg(10)->Arg(100);

void BM_DualCertificate(benchmark::State& state) {
  const Eigen::Index n = 3;
  const Eigen::MatrixXd Qp = bench_cost(n).matrix();
  std::vector<Eigen::MatrixXd> kernel;
  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(n, n);
  dq(0, 1) = dq(1, 0) = 1.0 / std::sqrt(2.0);
  kernel.push_back(dq);
  for (auto _ : state) benchmark::DoNotOptimize(dual_certificate(Qp, kernel));
}
BENCHMARK(BM_DualCertificate);

}  // namespace

BENCHMARK_MAIN();
