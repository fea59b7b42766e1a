#include "ioc/optimize.hpp"

#include <algorithm>
#include <cmath>

#include <ceres/ceres.h>

#include "ioc/errors.hpp"

namespace ioc {

namespace {

// Ceres skips L-BFGS updates whose curvature s'y falls below a fixed absolute
// threshold, so a cost that shrinks by many orders of magnitude would decay
// into steepest descent. The adapter multiplies the objective by `scale`,
// and the driver restarts with a fresh scale once the cost has dropped.
class Adapter final : public ceres::FirstOrderFunction {
 public:
  Adapter(const ObjectiveFn& f, int size, double scale)
      : f_(f), size_(size), scale_(scale) {}

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> x(params, size_);
    Eigen::VectorXd g;
    double value = 0.0;
    if (!f_(x, value, gradient ? &g : nullptr)) return false;
    if (!std::isfinite(value)) return false;
    *cost = scale_ * value;
    if (gradient) {
      if (g.size() != size_ || !g.allFinite()) return false;
      Eigen::Map<Eigen::VectorXd>(gradient, size_) = scale_ * g;
    }
    return true;
  }

  int NumParameters() const override { return size_; }

 private:
  const ObjectiveFn& f_;
  int size_;
  double scale_;
};

/// Records accepted steps and stops the run once the scaled cost is small
/// enough that the caller should rescale.
class TraceRecorder final : public ceres::IterationCallback {
 public:
  TraceRecorder(std::vector<TracePoint>& trace, int offset, double scale)
      : trace_(trace), offset_(offset), scale_(scale) {}

  ceres::CallbackReturnType operator()(
      const ceres::IterationSummary& summary) override {
    if ((summary.iteration == 0 && offset_ == 0) ||
        (summary.iteration > 0 && summary.step_is_successful)) {
      trace_.push_back({offset_ + summary.iteration, summary.cost / scale_});
    }
    if (summary.iteration > 0 && summary.cost > 0.0 && summary.cost < kRescaleBelow) {
      return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
    }
    return ceres::SOLVER_CONTINUE;
  }

  static constexpr double kRescaleBelow = 1e-3;

 private:
  std::vector<TracePoint>& trace_;
  int offset_;
  double scale_;
};

}  // namespace

MinimizerResult minimize_lbfgs(const ObjectiveFn& objective,
                               const Eigen::VectorXd& x0,
                               const MinimizerOptions& options) {
  const int size = static_cast<int>(x0.size());
  MinimizerResult result;
  result.x = x0;
  {
    double v0 = 0.0;
    if (!objective(x0, v0, nullptr) || !std::isfinite(v0)) {
      throw Error(ErrorCode::kNumericalFailure,
                  "objective cannot be evaluated at the initial point");
    }
  }

  constexpr int kMaxRescales = 60;
  for (int restart = 0; restart <= kMaxRescales; ++restart) {
    double v0 = 0.0;
    Eigen::VectorXd g0;
    if (!objective(result.x, v0, &g0)) break;
    if (g0.lpNorm<Eigen::Infinity>() <= options.grad_tol) {
      result.converged = true;
      result.message = "gradient tolerance reached";
      break;
    }
    const int remaining = options.max_iters - result.iterations;
    if (remaining <= 0) break;
    const double scale = std::abs(v0) > 0.0 ? 1.0 / std::abs(v0) : 1.0;

    ceres::GradientProblem problem(new Adapter(objective, size, scale));
    ceres::GradientProblemSolver::Options opts;
    opts.line_search_direction_type = ceres::LBFGS;
    opts.max_lbfgs_rank = options.memory;
    opts.max_num_iterations = remaining;
    opts.gradient_tolerance = options.grad_tol * scale;
    opts.function_tolerance = options.function_tol;
    opts.parameter_tolerance = options.parameter_tol;
    opts.logging_type = ceres::SILENT;
    opts.minimizer_progress_to_stdout = false;
    TraceRecorder recorder(result.trace, result.iterations, scale);
    opts.callbacks.push_back(&recorder);

    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, result.x.data(), &summary);
    result.iterations += std::max(0, static_cast<int>(summary.iterations.size()) - 1);
    result.message = summary.message;
    if (summary.termination_type == ceres::USER_SUCCESS) continue;
    result.converged = summary.termination_type == ceres::CONVERGENCE;
    break;
  }

  Eigen::VectorXd g;
  double v = 0.0;
  if (objective(result.x, v, &g)) {
    result.value = v;
    result.grad_norm = g.lpNorm<Eigen::Infinity>();
  }
  // Ceres does not report the step that triggers termination.
  if (result.trace.empty() || result.trace.back().iteration < result.iterations) {
    result.trace.push_back({result.iterations, result.value});
  }
  return result;
}

}  // namespace ioc
