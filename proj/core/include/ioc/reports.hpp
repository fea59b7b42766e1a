#pragma once

#include <string>

#include "ioc/baseline.hpp"
#include "ioc/bench.hpp"
#include "ioc/identifiability.hpp"
#include "ioc/noiseless.hpp"
#include "ioc/noisy.hpp"

namespace ioc {

// JSON documents written by the command-line tool. `extra_config` is a JSON
// object merged into the "config" echo of each result (for input paths and
// flags); pass "{}" when there is nothing to add.

std::string identifiability_report_to_json(const IdentifiabilityReport& report);

std::string recovery_result_to_json(const RecoveryResult& result,
                                    const std::string& extra_config = "{}");

std::string estimate_result_to_json(const EstimateResult& result, RiskMode mode,
                                    const RiskSettings& settings,
                                    const std::string& extra_config = "{}");

std::string baseline_result_to_json(const BaselineResult& result,
                                    const BaselineSettings& settings,
                                    const std::string& extra_config = "{}");

/// Keys mirror BenchConfig fields; all optional. "system" holds a system
/// object and replaces the random companion systems. snr_db_x / snr_db_u
/// accept a number or "none". Throws ParseError or InvalidArgument.
BenchConfig parse_bench_config_json(const std::string& text);
std::string bench_config_to_json(const BenchConfig& config);

/// Per-trial detail (systems, Q_bar, every Q_hat) so each error can be
/// recomputed from the file.
std::string bench_trials_to_json(const BenchReport& report);

}  // namespace ioc
