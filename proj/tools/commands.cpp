#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>

#include "ioc/baseline.hpp"
#include "ioc/bench.hpp"
#include "ioc/errors.hpp"
#include "ioc/forward_lqr.hpp"
#include "ioc/identifiability.hpp"
#include "ioc/io.hpp"
#include "ioc/noiseless.hpp"
#include "ioc/noisy.hpp"
#include "ioc/random.hpp"
#include "ioc/reports.hpp"
#include "ioc/trajectories.hpp"
#include "json.hpp"

namespace ioc::cli {

namespace {

using nlohmann::json;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
      return kExitIo;
    case ErrorCode::kSolverNotConverged:
    case ErrorCode::kAmbiguousSolution:
    case ErrorCode::kNumericalFailure:
      return kExitNotConverged;
    default:
      return kExitValidation;
  }
}

/// Runs a command body, translating library errors into exit statuses.
int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

std::optional<double> parse_snr(const std::string& text, const char* flag) {
  if (text == "none") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string(flag) + " must be a number of dB or \"none\"");
}

/// --x0 takes a JSON array literal or a path to a file holding one.
Eigen::VectorXd load_x0(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t");
  if (first != std::string::npos && arg[first] == '[') return parse_vector_json(arg);
  return parse_vector_json(read_text_file(arg));
}

}  // namespace

int run_forward(const ForwardArgs& a) {
  return guarded([&] {
    const LtiSystem sys = load_system(a.system);
    const CostMatrix Q = load_cost(a.cost);
    const Eigen::VectorXd x0 = load_x0(a.x0);
    require(Q.n() == sys.n(), "cost and system dimensions differ");
    require(x0.size() == sys.n(), "--x0 must have n entries");
    require(a.horizon >= 2, "--horizon must be at least 2");
    const Episode ep = simulate(sys, solve_riccati(sys, Q, a.horizon), x0);
    save_bundle(a.out, TrajectoryBundle({ep}));
    return kExitOk;
  });
}

int run_generate(const GenerateArgs& a) {
  return guarded([&] {
    const LtiSystem sys = load_system(a.system);
    const CostMatrix Q = load_cost(a.cost);
    require(Q.n() == sys.n(), "cost and system dimensions differ");
    require(a.horizon >= 2, "--horizon must be at least 2");
    require(a.episodes >= 1, "--episodes must be positive");
    const std::optional<double> snr_x = parse_snr(a.snr_x, "--snr-x");
    const std::optional<double> snr_u = parse_snr(a.snr_u, "--snr-u");
    TrajectoryBundle bundle =
        generate_bundle(sys, Q, a.horizon, static_cast<std::size_t>(a.episodes),
                        uniform_initial_states(sys.n()), derive_seed(a.seed, 2));
    if (snr_x || snr_u) bundle = add_noise(bundle, snr_x, snr_u, derive_seed(a.seed, 3));
    save_bundle(a.out, bundle);
    return kExitOk;
  });
}

int run_identify(const IdentifyArgs& a) {
  return guarded([&] {
    const LtiSystem sys = load_system(a.system);
    const TrajectoryBundle bundle = load_bundle(a.bundle);
    write_text_file(a.out, identifiability_report_to_json(assess(sys, bundle)));
    return kExitOk;
  });
}

int run_estimate(const EstimateArgs& a) {
  return guarded([&] {
    require(a.mode == "exact" || a.mode == "risk-x" || a.mode == "risk-u" ||
                a.mode == "residual-min",
            "--mode must be exact, risk-x, risk-u or residual-min");
    require(a.phi > 0.0 && a.epsilon > 0.0 && a.penalty_weight > 0.0 && a.grad_tol > 0.0 &&
                a.max_iters > 0,
            "--phi, --epsilon, --penalty-weight, --grad-tol and --max-iters must be positive");
    const LtiSystem sys = load_system(a.system);
    const TrajectoryBundle bundle = load_bundle(a.bundle);
    const json echo = {{"system", a.system}, {"bundle", a.bundle}, {"mode", a.mode},
                       {"phi", a.phi},       {"epsilon", a.epsilon}};
    const std::string extra = echo.dump();

    MinimizerOptions optimizer;
    optimizer.grad_tol = a.grad_tol;
    optimizer.max_iters = a.max_iters;

    if (a.mode == "exact") {
      write_text_file(a.out, recovery_result_to_json(recover_exact(sys, bundle), extra));
      return kExitOk;
    }
    if (a.mode == "residual-min") {
      BaselineSettings settings;
      settings.phi = a.phi;
      settings.epsilon = a.epsilon;
      settings.penalty_weight = a.penalty_weight;
      settings.optimizer = optimizer;
      const BaselineResult r = estimate_rm(sys, bundle, settings);
      write_text_file(a.out, baseline_result_to_json(r, settings, extra));
      return r.converged ? kExitOk : kExitNotConverged;
    }
    RiskSettings settings;
    settings.phi = a.phi;
    settings.epsilon = a.epsilon;
    settings.penalty_weight = a.penalty_weight;
    settings.optimizer = optimizer;
    const RiskMode mode = a.mode == "risk-x" ? RiskMode::kStateObs : RiskMode::kInputObs;
    const EstimateResult r = estimate(RiskProblem(sys, bundle, mode, settings));
    write_text_file(a.out, estimate_result_to_json(r, mode, settings, extra));
    return r.converged ? kExitOk : kExitNotConverged;
  });
}

int run_bench(const BenchArgs& a) {
  return guarded([&] {
    BenchConfig config =
        a.config.empty() ? BenchConfig{} : parse_bench_config_json(read_text_file(a.config));
    if (a.threads) config.threads = *a.threads;
    config.validate();
    const BenchReport report = run_benchmark(config);
    const std::filesystem::path dir(a.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + dir.string() + "'");
    write_text_file(dir / "trials.csv", trials_to_csv(report));
    write_text_file(dir / "summary.csv", summary_to_csv(report));
    write_text_file(dir / "trials.json", bench_trials_to_json(report));
    write_text_file(dir / "config.json", bench_config_to_json(config));
    std::cout << summary_to_csv(report);
    return kExitOk;
  });
}

}  // namespace ioc::cli
