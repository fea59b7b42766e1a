#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ioc::cli {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNotConverged = 3;

struct ForwardArgs {
  std::string system;
  std::string cost;
  std::string x0;
  long horizon = 50;
  std::string out;
};

struct GenerateArgs {
  std::string system;
  std::string cost;
  long horizon = 50;
  long episodes = 1;
  std::uint64_t seed = 1;
  std::string snr_x = "none";
  std::string snr_u = "none";
  std::string out;
};

struct IdentifyArgs {
  std::string system;
  std::string bundle;
  std::string out;
};

struct EstimateArgs {
  std::string system;
  std::string bundle;
  std::string mode;
  double phi = 5.0;
  double epsilon = 1e-3;
  double penalty_weight = 1e4;
  double grad_tol = 1e-7;
  int max_iters = 2000;
  std::string out;
};

struct BenchArgs {
  std::string config;
  std::string out_dir;
  std::optional<int> threads;
};

// Each returns an exit status; library errors are mapped, not rethrown.
int run_forward(const ForwardArgs& args);
int run_generate(const GenerateArgs& args);
int run_identify(const IdentifyArgs& args);
int run_estimate(const EstimateArgs& args);
int run_bench(const BenchArgs& args);

}  // namespace ioc::cli
