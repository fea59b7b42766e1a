#include "ioc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>
#include <thread>

#include "ioc/baseline.hpp"
#include "ioc/discretize.hpp"
#include "ioc/errors.hpp"
#include "ioc/io.hpp"
#include "ioc/noisy.hpp"
#include "ioc/random.hpp"

namespace ioc {

namespace {

constexpr std::uint64_t kSystemStream = 0;
constexpr std::uint64_t kCostStream = 1;
constexpr std::uint64_t kBundleStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

double mean_prefix(const std::vector<double>& v, std::size_t count) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  count = std::min(count, v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) s += v[i];
  return s / static_cast<double>(count);
}

}  // namespace

std::string_view to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::kRiskX: return "risk_x";
    case BenchMethod::kRiskU: return "risk_u";
    case BenchMethod::kResidualMin: return "residual_min";
  }
  return "unknown";
}

BenchMethod bench_method_from_string(std::string_view s) {
  if (s == "risk_x") return BenchMethod::kRiskX;
  if (s == "risk_u") return BenchMethod::kRiskU;
  if (s == "residual_min") return BenchMethod::kResidualMin;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(s) + "'");
}

void BenchConfig::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (n_trials < 1) fail("n_trials must be >= 1");
  if (M_grid.empty()) fail("M_grid must be nonempty");
  if (std::any_of(M_grid.begin(), M_grid.end(), [](std::size_t m) { return m == 0; })) {
    fail("M_grid entries must be >= 1");
  }
  if (methods.empty()) fail("methods must be nonempty");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (N < 3) fail("N must be >= 3");
  if (!(phi > 0.0) || !(epsilon > 0.0) || !(penalty_weight > 0.0)) {
    fail("phi, epsilon and penalty_weight must be positive");
  }
  if (!(coef_range >= 0.0) || !(q1_range > 0.0) || !(x0_range > 0.0)) {
    fail("sampling ranges must be positive");
  }
  if (rejection_budget < 1) fail("rejection_budget must be >= 1");
}

std::uint64_t system_hash(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](const Eigen::MatrixXd& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        unsigned char bytes[sizeof(double)];
        const double v = M(i, j);
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char b : bytes) {
          h ^= b;
          h *= 0x100000001b3ULL;
        }
      }
    }
  };
  feed(A);
  feed(B);
  return h;
}

BenchInstance sample_instance(const BenchConfig& config, std::size_t trial_id) {
  const std::uint64_t trial_seed = derive_seed(config.master_seed, trial_id);

  int system_rejections = 0;
  std::optional<LtiSystem> sys = config.fixed_system;
  if (!sys) {
    auto rng = make_rng(trial_seed, kSystemStream);
    std::uniform_real_distribution<double> coef(-config.coef_range, config.coef_range);
    while (!sys) {
      Eigen::MatrixXd A_hat(2, 2);
      A_hat << 0.0, 1.0, 0.0, 0.0;
      A_hat(1, 0) = coef(rng);
      A_hat(1, 1) = coef(rng);
      const Eigen::MatrixXd B_hat = (Eigen::MatrixXd(2, 1) << 0.0, 1.0).finished();
      try {
        sys = discretize(A_hat, B_hat, config.dt);
      } catch (const InvalidSystemError&) {
        if (++system_rejections >= config.rejection_budget) {
          throw Error(ErrorCode::kRejectionBudgetExceeded,
                      "no valid system within the rejection budget");
        }
      }
    }
  }
  const Eigen::Index n = sys->n();

  auto rng = make_rng(trial_seed, kCostStream);
  std::uniform_real_distribution<double> entry(-config.q1_range, config.q1_range);
  int cost_rejections = 0;
  for (;;) {
    Eigen::MatrixXd Q1(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) Q1(i, j) = entry(rng);
    }
    const Eigen::MatrixXd Q_bar = Q1 * Q1.transpose();
    if (Q_bar.squaredNorm() <= config.phi) {
      return BenchInstance{*sys, CostMatrix::create(Q_bar, config.phi),
                           uniform_initial_states(n, -config.x0_range, config.x0_range),
                           system_rejections, cost_rejections};
    }
    if (++cost_rejections >= config.rejection_budget) {
      throw Error(ErrorCode::kRejectionBudgetExceeded,
                  "no cost inside the ball within the rejection budget");
    }
  }
}

TrialRecord run_trial(const BenchConfig& config, std::size_t trial_id) {
  TrialRecord rec;
  rec.trial_id = trial_id;
  try {
    const BenchInstance inst = sample_instance(config, trial_id);
    rec.A = inst.sys.A();
    rec.B = inst.sys.B();
    rec.Q_bar = inst.Q_bar.matrix();
    rec.system_hash = system_hash(rec.A, rec.B);
    rec.system_rejections = inst.system_rejections;
    rec.cost_rejections = inst.cost_rejections;

    const std::uint64_t trial_seed = derive_seed(config.master_seed, trial_id);
    const std::size_t M_max = *std::max_element(config.M_grid.begin(), config.M_grid.end());
    const TrajectoryBundle exact =
        generate_bundle(inst.sys, inst.Q_bar, config.N, M_max, inst.sampler,
                        derive_seed(trial_seed, kBundleStream));
    const TrajectoryBundle noisy = add_noise(exact, config.snr_db_x, config.snr_db_u,
                                             derive_seed(trial_seed, kNoiseStream));

    RiskSettings rs;
    rs.phi = config.phi;
    rs.epsilon = config.epsilon;
    rs.penalty_weight = config.penalty_weight;
    BaselineSettings bs;
    bs.phi = config.phi;
    bs.epsilon = config.epsilon;
    bs.penalty_weight = config.penalty_weight;

    for (const std::size_t M : config.M_grid) {
      const TrajectoryBundle data = noisy.prefix(M);
      for (const BenchMethod method : config.methods) {
        MethodOutcome out;
        out.M = M;
        out.method = method;
        out.snr_x_realized = mean_prefix(noisy.noise().realized_snr_x, M);
        out.snr_u_realized = mean_prefix(noisy.noise().realized_snr_u, M);
        const auto start = std::chrono::steady_clock::now();
        try {
          if (method == BenchMethod::kResidualMin) {
            const BaselineResult r = estimate_rm(inst.sys, data, bs);
            out.Q_hat = r.Q_hat.matrix();
            out.converged = r.converged;
            out.rel_error = scaled_relative_error(out.Q_hat, rec.Q_bar);
          } else {
            const RiskMode mode =
                method == BenchMethod::kRiskX ? RiskMode::kStateObs : RiskMode::kInputObs;
            const EstimateResult r = estimate(RiskProblem(inst.sys, data, mode, rs));
            out.Q_hat = r.Q_hat.matrix();
            out.converged = r.converged;
            out.rel_error = relative_error(out.Q_hat, rec.Q_bar);
          }
        } catch (const std::exception& e) {
          out.failed = true;
          out.error = e.what();
          out.rel_error = std::numeric_limits<double>::quiet_NaN();
        }
        out.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        rec.outcomes.push_back(std::move(out));
      }
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.outcomes.clear();
    for (const std::size_t M : config.M_grid) {
      for (const BenchMethod method : config.methods) {
        MethodOutcome out;
        out.M = M;
        out.method = method;
        out.failed = true;
        out.error = rec.error;
        out.rel_error = std::numeric_limits<double>::quiet_NaN();
        out.snr_x_realized = std::numeric_limits<double>::quiet_NaN();
        out.snr_u_realized = std::numeric_limits<double>::quiet_NaN();
        rec.outcomes.push_back(std::move(out));
      }
    }
  }
  return rec;
}

int resolve_thread_count(int requested) {
  int threads = requested > 0
                    ? requested
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("IOC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min(threads, static_cast<int>(cap));
  }
  return std::max(1, threads);
}

BenchReport run_benchmark(const BenchConfig& config) {
  config.validate();
  BenchReport report;
  report.config = config;
  const auto n_trials = static_cast<std::size_t>(config.n_trials);
  report.trials.resize(n_trials);

  const int workers = std::min(resolve_thread_count(config.threads),
                               static_cast<int>(n_trials));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n_trials; i = next++) {
      report.trials[i] = run_trial(config, i);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  report.summary = summarize(config, report.trials);
  return report;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const BenchConfig& config,
                                  const std::vector<TrialRecord>& trials) {
  std::vector<SummaryRow> rows;
  for (const std::size_t M : config.M_grid) {
    for (const BenchMethod method : config.methods) {
      std::vector<double> errors;
      for (const TrialRecord& t : trials) {
        for (const MethodOutcome& o : t.outcomes) {
          if (o.M == M && o.method == method && !o.failed) errors.push_back(o.rel_error);
        }
      }
      rows.push_back(SummaryRow{M, method, quantile(errors, 0.5), quantile(errors, 0.25),
                                quantile(errors, 0.75), errors.size()});
    }
  }
  return rows;
}

std::string trials_to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "trial_id,M,method,rel_error,converged,wall_ms,snr_x_realized,snr_u_realized\n";
  const auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  for (const TrialRecord& t : report.trials) {
    for (const MethodOutcome& o : t.outcomes) {
      out << t.trial_id << ',' << o.M << ',' << to_string(o.method) << ','
          << (o.failed ? std::string() : num(o.rel_error)) << ','
          << (o.converged ? "true" : "false") << ','
          << (report.config.record_wall_time ? num(o.wall_ms) : std::string()) << ','
          << num(o.snr_x_realized) << ',' << num(o.snr_u_realized) << '\n';
    }
  }
  return out.str();
}

std::string summary_to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "M,method,median,q25,q75,n_ok\n";
  const auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  for (const SummaryRow& r : report.summary) {
    out << r.M << ',' << to_string(r.method) << ',' << num(r.median) << ','
        << num(r.q25) << ',' << num(r.q75) << ',' << r.n_ok << '\n';
  }
  return out.str();
}

}  // namespace ioc
