#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace ioc::cli;
  CLI::App app{"Inverse optimal control for finite-horizon LQR: simulate, check "
               "identifiability, estimate state costs and benchmark estimators."};
  app.require_subcommand(1);
  app.footer("Exit status: 0 success, 1 I/O error, 2 validation error, 3 solver did not converge.\n"
             "IOC_THREADS caps the worker pool of the bench command.");

  ForwardArgs fwd;
  auto* forward = app.add_subcommand("forward", "Simulate the optimal closed loop from one initial state");
  forward->add_option("--system", fwd.system, "System JSON")->required();
  forward->add_option("--cost", fwd.cost, "Cost JSON")->required();
  forward->add_option("--x0", fwd.x0, "Initial state as a JSON array or a file holding one")->required();
  forward->add_option("--horizon", fwd.horizon, "Horizon N")->capture_default_str();
  forward->add_option("--out", fwd.out, "Output trajectory CSV")->required();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate optimal episodes, optionally noisy");
  generate->add_option("--system", gen.system, "System JSON")->required();
  generate->add_option("--cost", gen.cost, "Cost JSON")->required();
  generate->add_option("--horizon", gen.horizon, "Horizon N")->capture_default_str();
  generate->add_option("--episodes", gen.episodes, "Number of episodes M")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  generate->add_option("--snr-x", gen.snr_x, "State noise SNR in dB, or none")->capture_default_str();
  generate->add_option("--snr-u", gen.snr_u, "Input noise SNR in dB, or none")->capture_default_str();
  generate->add_option("--out", gen.out, "Output trajectory CSV")->required();

  IdentifyArgs idn;
  auto* identify = app.add_subcommand("identify", "Check whether noiseless data determine the cost");
  identify->add_option("--system", idn.system, "System JSON")->required();
  identify->add_option("--bundle", idn.bundle, "Trajectory CSV")->required();
  identify->add_option("--out", idn.out, "Output report JSON")->required();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the state cost from trajectories");
  estimate->add_option("--system", est.system, "System JSON")->required();
  estimate->add_option("--bundle", est.bundle, "Trajectory CSV")->required();
  estimate->add_option("--mode", est.mode, "exact, risk-x, risk-u or residual-min")->required();
  estimate->add_option("--phi", est.phi, "Squared Frobenius radius of the cost ball")->capture_default_str();
  estimate->add_option("--epsilon", est.epsilon, "Smoothing of the PSD surrogate")->capture_default_str();
  estimate->add_option("--penalty-weight", est.penalty_weight, "Initial constraint penalty weight")
      ->capture_default_str();
  estimate->add_option("--grad-tol", est.grad_tol, "Optimizer gradient tolerance")->capture_default_str();
  estimate->add_option("--max-iters", est.max_iters, "Optimizer iteration cap per penalty round")
      ->capture_default_str();
  estimate->add_option("--out", est.out, "Output result JSON")->required();

  BenchArgs bch;
  auto* bench = app.add_subcommand("bench", "Run the Monte-Carlo comparison of estimators");
  bench->add_option("--config", bch.config, "Benchmark config JSON (defaults when omitted)");
  bench->add_option("--out-dir", bch.out_dir, "Directory for trials.csv, summary.csv, trials.json, config.json")
      ->required();
  bench->add_option("--threads", bch.threads, "Worker threads (0 = hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*forward) return run_forward(fwd);
  if (*generate) return run_generate(gen);
  if (*identify) return run_identify(idn);
  if (*estimate) return run_estimate(est);
  return run_bench(bch);
}
