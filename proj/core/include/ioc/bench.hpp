#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ioc/trajectories.hpp"
#include "ioc/types.hpp"

namespace ioc {

enum class BenchMethod { kRiskX, kRiskU, kResidualMin };
std::string_view to_string(BenchMethod method);
BenchMethod bench_method_from_string(std::string_view s);

struct BenchConfig {
  int n_trials = 30;
  /// Replaces the random companion systems when set.
  std::optional<LtiSystem> fixed_system;
  /// Companion form A_hat = [[0, 1], [a1, a2]], a_i ~ U[-coef_range, coef_range],
  /// B_hat = [0; 1].
  double coef_range = 3.0;
  double dt = 0.1;
  Eigen::Index N = 50;
  std::vector<std::size_t> M_grid{10, 50, 100, 200};
  std::optional<double> snr_db_x = 15.0;
  std::optional<double> snr_db_u = 20.0;
  double phi = kDefaultPhi;
  double epsilon = 1e-3;
  double penalty_weight = 1e4;
  /// Entries of Q_1 in Q_bar = Q_1 Q_1' are U[-q1_range, q1_range].
  double q1_range = 1.0;
  /// Initial states are U[-x0_range, x0_range]^n.
  double x0_range = 5.0;
  int rejection_budget = 1000;
  std::uint64_t master_seed = 1;
  std::vector<BenchMethod> methods{BenchMethod::kRiskX, BenchMethod::kRiskU,
                                   BenchMethod::kResidualMin};
  /// 0 picks the hardware concurrency; IOC_THREADS caps either choice.
  int threads = 0;
  /// Wall-clock columns make trials.csv non-reproducible, so they are opt-in.
  bool record_wall_time = false;

  /// Throws InvalidArgument.
  void validate() const;
};

struct BenchInstance {
  LtiSystem sys;
  CostMatrix Q_bar;
  InitialStateSampler sampler;
  int system_rejections = 0;
  int cost_rejections = 0;
};

/// All randomness comes from derive_seed(master_seed, trial_id).
/// Throws RejectionBudgetExceeded.
BenchInstance sample_instance(const BenchConfig& config, std::size_t trial_id);

struct MethodOutcome {
  std::size_t M = 0;
  BenchMethod method = BenchMethod::kRiskX;
  /// ||Q_hat - Q_bar||_F / ||Q_bar||_F; the baseline is rescaled optimally.
  double rel_error = 0.0;
  bool converged = false;
  bool failed = false;
  std::string error;
  double wall_ms = 0.0;
  double snr_x_realized = 0.0;  ///< mean over the M episodes used
  double snr_u_realized = 0.0;
  Eigen::MatrixXd Q_hat;
};

struct TrialRecord {
  std::size_t trial_id = 0;
  std::uint64_t system_hash = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd Q_bar;
  int system_rejections = 0;
  int cost_rejections = 0;
  std::vector<MethodOutcome> outcomes;
  bool failed = false;
  std::string error;
};

struct SummaryRow {
  std::size_t M = 0;
  BenchMethod method = BenchMethod::kRiskX;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::size_t n_ok = 0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> summary;
};

/// Runs one trial; failures are recorded, never thrown.
TrialRecord run_trial(const BenchConfig& config, std::size_t trial_id);

/// Trials run on a worker pool and are reported in trial_id order, so the
/// output does not depend on scheduling.
BenchReport run_benchmark(const BenchConfig& config);

/// Quantile with linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double p);

std::vector<SummaryRow> summarize(const BenchConfig& config,
                                  const std::vector<TrialRecord>& trials);

/// trial_id,M,method,rel_error,converged,wall_ms,snr_x_realized,snr_u_realized
std::string trials_to_csv(const BenchReport& report);
/// M,method,median,q25,q75,n_ok
std::string summary_to_csv(const BenchReport& report);

/// FNV-1a over the bytes of A and B.
std::uint64_t system_hash(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Worker count after applying IOC_THREADS.
int resolve_thread_count(int requested);

}  // namespace ioc
