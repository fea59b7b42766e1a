#include "ioc/noisy.hpp"

#include <algorithm>
#include <cmath>

#include "ioc/errors.hpp"
#include "penalized.hpp"
#include "ioc/pmp.hpp"
#include "ioc/smoothing.hpp"
#include "ioc/vectorization.hpp"

namespace ioc {

std::string_view to_string(RiskMode mode) {
  switch (mode) {
    case RiskMode::kStateObs: return "state_obs";
    case RiskMode::kInputObs: return "input_obs";
  }
  return "unknown";
}

RiskProblem::RiskProblem(LtiSystem sys, TrajectoryBundle bundle, RiskMode mode,
                         RiskSettings settings)
    : sys_(std::move(sys)),
      bundle_(std::move(bundle)),
      mode_(mode),
      settings_(std::move(settings)) {
  if (bundle_.M() == 0) throw Error(ErrorCode::kInvalidArgument, "bundle is empty");
  if (bundle_.n() != sys_.n() || bundle_.m() != sys_.m()) {
    throw Error(ErrorCode::kDimensionMismatch, "bundle and system sizes differ");
  }
  if (!(settings_.epsilon > 0.0) || !(settings_.phi > 0.0) ||
      !(settings_.penalty_weight > 0.0) || settings_.max_penalty_rounds < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "epsilon, phi and penalty weight must be positive");
  }
  const Eigen::Index N = bundle_.N();
  const auto M = static_cast<Eigen::Index>(bundle_.M());
  const Eigen::Index rows = mode_ == RiskMode::kStateObs ? sys_.n() * (N - 1)
                                                         : sys_.m() * (N - 1);
  obs_.resize(rows, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const Episode& e = bundle_.episode(static_cast<std::size_t>(i));
    obs_.col(i) = mode_ == RiskMode::kStateObs ? vec(e.x.rightCols(N - 1)) : vec(e.u);
  }
  x_bar_ = bundle_.initial_states();
  const double power = obs_.squaredNorm() / static_cast<double>(M);
  scale_ = power > 0.0 ? power : 1.0;
}

namespace {

struct Forward {
  PmpSystem pmp;
  PmpFactorization lu;
  Eigen::MatrixXd T;         // F(Q)^{-1} A_tilde
  Eigen::MatrixXd residual;  // G T X_bar - obs
};

Forward forward(const RiskProblem& problem, const Eigen::MatrixXd& Q) {
  PmpSystem pmp = build_pmp_system(problem.sys(), symmetrize(Q), problem.bundle().N());
  PmpFactorization lu(pmp);
  Eigen::MatrixXd T = lu.solve(pmp.A_tilde);
  const Eigen::MatrixXd& G = problem.mode() == RiskMode::kStateObs ? pmp.G_x : pmp.G_u;
  Eigen::MatrixXd residual = (G * T) * problem.initial_states() - problem.observations();
  return Forward{std::move(pmp), std::move(lu), std::move(T), std::move(residual)};
}

Eigen::MatrixXd adjoint_gradient(const RiskProblem& problem, const Forward& fw) {
  const Eigen::Index n = fw.pmp.n;
  const Eigen::Index w = 2 * n;
  const Eigen::Index blocks = fw.pmp.N - 1;
  const double M = static_cast<double>(problem.bundle().M());
  const Eigen::MatrixXd& G =
      problem.mode() == RiskMode::kStateObs ? fw.pmp.G_x : fw.pmp.G_u;
  const Eigen::MatrixXd W =
      fw.lu.solve_transposed(2.0 * G.transpose() *
                             (fw.residual * problem.initial_states().transpose()));
  // Q sits in the adjoint rows of block k and the state columns of block k-1.
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < blocks; ++k) {
    grad -= W.block(k * w + n, 0, n, n) * fw.T.block((k - 1) * w, 0, n, n).transpose();
  }
  return symmetrize(grad / M);
}

}  // namespace

RiskValue eval_risk(const RiskProblem& problem, const Eigen::MatrixXd& Q) {
  const Forward fw = forward(problem, Q);
  RiskValue out;
  out.per_episode = fw.residual.colwise().squaredNorm().transpose();
  out.value = out.per_episode.mean();
  return out;
}

Eigen::MatrixXd risk_gradient(const RiskProblem& problem, const Eigen::MatrixXd& Q) {
  return adjoint_gradient(problem, forward(problem, Q));
}

RiskAndGradient eval_risk_and_gradient(const RiskProblem& problem,
                                       const Eigen::MatrixXd& Q) {
  const Forward fw = forward(problem, Q);
  return RiskAndGradient{
      fw.residual.squaredNorm() / static_cast<double>(problem.bundle().M()),
      adjoint_gradient(problem, fw)};
}

PenaltyValue constraint_penalty(const Eigen::MatrixXd& Q, double epsilon,
                                double weight, double phi) {
  PenaltyValue p;
  const SmoothedMaxEig s = smoothed_max_eig(-Q, epsilon);
  p.psd_violation = std::max(0.0, s.value);
  p.gradient = -2.0 * weight * p.psd_violation * s.gradient;
  p.value = weight * p.psd_violation * p.psd_violation;
  if (std::isfinite(phi)) {
    p.ball_violation = std::max(0.0, Q.squaredNorm() - phi);
    p.value += weight * p.ball_violation * p.ball_violation;
    p.gradient += 4.0 * weight * p.ball_violation * Q;
  }
  return p;
}

EstimateResult estimate(const RiskProblem& problem) {
  const RiskSettings& cfg = problem.settings();
  const Eigen::Index n = problem.sys().n();
  const double scale = problem.scale();

  detail::PenalizedProblem pp;
  pp.smooth = [&](const Eigen::VectorXd& x, double& value, Eigen::VectorXd* grad) {
    const Eigen::MatrixXd Q = unvech(x);
    try {
      if (grad) {
        const RiskAndGradient rg = eval_risk_and_gradient(problem, Q);
        value = rg.value / scale;
        *grad = vech_gradient(rg.gradient / scale);
      } else {
        value = eval_risk(problem, Q).value / scale;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSingularSystem) return false;
      throw;
    }
    return true;
  };
  pp.to_matrix = [](const Eigen::VectorXd& x) { return unvech(x); };
  pp.pullback = [](const Eigen::MatrixXd& G) { return vech_gradient(G); };
  pp.epsilon = cfg.epsilon;
  pp.weight = cfg.penalty_weight;
  pp.max_rounds = cfg.max_penalty_rounds;
  pp.phi = cfg.phi;
  pp.optimizer = cfg.optimizer;
  pp.trace_scale = scale;
  const detail::PenalizedRun run =
      detail::run_penalized(pp, vech(Eigen::MatrixXd::Identity(n, n)));

  EstimateResult result{CostMatrix::create(Eigen::MatrixXd::Zero(n, n), cfg.phi),
                        run.trace, run.grad_norm, 0.0, {}, run.weight,
                        run.iterations, run.converged, false};
  const Eigen::VectorXd v = run.x;

  // The smoothed constraint already implies PSD; the projection is a guard.
  Eigen::MatrixXd Qp = unvech(v);
  result.projected = min_eigenvalue(Qp) < 0.0 || Qp.squaredNorm() > cfg.phi;
  if (result.projected) {
    Qp = project_psd(Qp);
    if (Qp.squaredNorm() > cfg.phi) Qp *= std::sqrt(cfg.phi / Qp.squaredNorm());
  }
  result.Q_hat = CostMatrix::create(Qp, cfg.phi);
  result.risk = eval_risk(problem, Qp).value;
  result.constraint_activity = {min_eigenvalue(Qp), cfg.phi - Qp.squaredNorm()};
  return result;
}

}  // namespace ioc
