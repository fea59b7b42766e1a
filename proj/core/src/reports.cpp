#include "ioc/reports.hpp"

#include <limits>

#include "ioc/io.hpp"
#include "json_util.hpp"

namespace ioc {

namespace {

using nlohmann::json;
using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::parse_json;

json trace_to_json(const std::vector<EstimateTracePoint>& trace) {
  json out = json::array();
  for (const EstimateTracePoint& p : trace) {
    out.push_back({{"iteration", p.iteration},
                   {"objective", p.objective},
                   {"penalty_round", p.penalty_round}});
  }
  return out;
}

json merged_config(json base, const std::string& extra) {
  const json e = parse_json(extra);
  if (!e.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "extra config must be a JSON object");
  }
  for (auto it = e.begin(); it != e.end(); ++it) base[it.key()] = it.value();
  return base;
}

json optimizer_to_json(const MinimizerOptions& o) {
  return {{"max_iters", o.max_iters},
          {"grad_tol", o.grad_tol},
          {"function_tol", o.function_tol},
          {"memory", o.memory}};
}

json snr_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json("none");
}

std::optional<double> snr_from_json(const json& v, const char* key) {
  if (v.is_string() && v.get<std::string>() == "none") return std::nullopt;
  if (v.is_number()) return v.get<double>();
  throw Error(ErrorCode::kParseError, std::string(key) + " must be a number or \"none\"");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string identifiability_report_to_json(const IdentifiabilityReport& report) {
  json j;
  j["verdict"] = std::string(to_string(report.verdict));
  j["rank_AD"] = report.rank_AD;
  j["rows_AD"] = report.rows_AD;
  j["full_column_rank"] = report.full_column_rank;
  j["kernel_dim"] = report.kernel_basis.size();
  json basis = json::array();
  for (const Eigen::MatrixXd& dq : report.kernel_basis) basis.push_back(matrix_to_json(dq));
  j["kernel_basis"] = std::move(basis);
  j["terminal_states_independent"] = report.terminal_states_independent
                                         ? json(*report.terminal_states_independent)
                                         : json(nullptr);
  if (report.dual_certificate) {
    const DualCertificate& c = *report.dual_certificate;
    j["dual_certificate"] = {{"Phi_star", matrix_to_json(c.Phi_star)},
                             {"rank_Phi", c.rank_Phi},
                             {"intersection_trivial", c.intersection_trivial},
                             {"status", std::string(to_string(c.status))},
                             {"iterations", c.iterations},
                             {"objective", c.objective}};
  } else {
    j["dual_certificate"] = nullptr;
  }
  j["Q_prime"] = matrix_to_json(report.Q_prime);
  j["linear_residual"] = report.linear_residual;
  return j.dump(2) + "\n";
}

std::string recovery_result_to_json(const RecoveryResult& result,
                                    const std::string& extra_config) {
  json j;
  j["method"] = "exact";
  j["Q"] = matrix_to_json(result.Q.matrix());
  j["phi"] = result.Q.phi();
  j["converged"] = true;
  j["objective_trace"] = json::array();
  j["residual"] = result.residual;
  j["clamped"] = result.clamped;
  j["verdict"] = std::string(to_string(result.report.verdict));
  const Eigen::MatrixXd Q = result.Q.matrix();
  j["constraint_activity"] = {{"psd_margin", min_eigenvalue(Q)},
                              {"ball_margin", result.Q.phi() - Q.squaredNorm()}};
  j["config"] = merged_config(json::object(), extra_config);
  return j.dump(2) + "\n";
}

std::string estimate_result_to_json(const EstimateResult& result, RiskMode mode,
                                    const RiskSettings& settings,
                                    const std::string& extra_config) {
  json j;
  j["method"] = mode == RiskMode::kStateObs ? "risk_x" : "risk_u";
  j["Q"] = matrix_to_json(result.Q_hat.matrix());
  j["objective_trace"] = trace_to_json(result.objective_trace);
  j["converged"] = result.converged;
  j["grad_norm_final"] = result.grad_norm_final;
  j["risk"] = result.risk;
  j["constraint_activity"] = {{"psd_margin", result.constraint_activity.psd_margin},
                              {"ball_margin", result.constraint_activity.ball_margin}};
  j["penalty_weight_final"] = result.penalty_weight_final;
  j["iterations"] = result.iterations;
  j["projected"] = result.projected;
  j["config"] = merged_config({{"mode", std::string(to_string(mode))},
                               {"phi", settings.phi},
                               {"epsilon", settings.epsilon},
                               {"penalty_weight", settings.penalty_weight},
                               {"max_penalty_rounds", settings.max_penalty_rounds},
                               {"initial_Q", "identity"},
                               {"optimizer", optimizer_to_json(settings.optimizer)}},
                              extra_config);
  return j.dump(2) + "\n";
}

std::string baseline_result_to_json(const BaselineResult& result,
                                    const BaselineSettings& settings,
                                    const std::string& extra_config) {
  json j;
  j["method"] = "residual_minimization";
  j["Q"] = matrix_to_json(result.Q_hat.matrix());
  j["input_weight"] = result.input_weight;
  j["objective"] = result.objective;
  j["objective_trace"] = trace_to_json(result.objective_trace);
  j["converged"] = result.converged;
  j["degenerate"] = result.degenerate;
  j["iterations"] = result.iterations;
  const Eigen::MatrixXd Q = result.Q_hat.matrix();
  j["constraint_activity"] = {{"psd_margin", min_eigenvalue(Q)},
                              {"ball_margin", result.Q_hat.phi() - Q.squaredNorm()}};
  j["config"] = merged_config({{"normalization", "trace(Q) = n"},
                               {"epsilon", settings.epsilon},
                               {"penalty_weight", settings.penalty_weight},
                               {"max_penalty_rounds", settings.max_penalty_rounds},
                               {"optimizer", optimizer_to_json(settings.optimizer)}},
                              extra_config);
  return j.dump(2) + "\n";
}

BenchConfig parse_bench_config_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "config must be a JSON object");
  BenchConfig c;
  c.n_trials = get_or(j, "n_trials", c.n_trials);
  c.coef_range = get_or(j, "coef_range", c.coef_range);
  c.dt = get_or(j, "dt", c.dt);
  c.N = get_or<Eigen::Index>(j, "N", c.N);
  c.M_grid = get_or(j, "M_grid", c.M_grid);
  if (j.contains("snr_db_x")) c.snr_db_x = snr_from_json(j["snr_db_x"], "snr_db_x");
  if (j.contains("snr_db_u")) c.snr_db_u = snr_from_json(j["snr_db_u"], "snr_db_u");
  c.phi = get_or(j, "phi", c.phi);
  c.epsilon = get_or(j, "epsilon", c.epsilon);
  c.penalty_weight = get_or(j, "penalty_weight", c.penalty_weight);
  c.q1_range = get_or(j, "q1_range", c.q1_range);
  c.x0_range = get_or(j, "x0_range", c.x0_range);
  c.rejection_budget = get_or(j, "rejection_budget", c.rejection_budget);
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", c.master_seed);
  c.threads = get_or(j, "threads", c.threads);
  c.record_wall_time = get_or(j, "record_wall_time", c.record_wall_time);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const std::string& m : get_or<std::vector<std::string>>(j, "methods", {})) {
      c.methods.push_back(bench_method_from_string(m));
    }
  }
  if (j.contains("system")) c.fixed_system = parse_system_json(j["system"].dump());
  c.validate();
  return c;
}

std::string bench_config_to_json(const BenchConfig& c) {
  json j;
  j["n_trials"] = c.n_trials;
  j["coef_range"] = c.coef_range;
  j["dt"] = c.dt;
  j["N"] = c.N;
  j["M_grid"] = c.M_grid;
  j["snr_db_x"] = snr_to_json(c.snr_db_x);
  j["snr_db_u"] = snr_to_json(c.snr_db_u);
  j["phi"] = c.phi;
  j["epsilon"] = c.epsilon;
  j["penalty_weight"] = c.penalty_weight;
  j["q1_range"] = c.q1_range;
  j["x0_range"] = c.x0_range;
  j["rejection_budget"] = c.rejection_budget;
  j["master_seed"] = c.master_seed;
  json methods = json::array();
  for (const BenchMethod m : c.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = std::move(methods);
  j["record_wall_time"] = c.record_wall_time;
  if (c.fixed_system) j["system"] = json::parse(system_to_json(*c.fixed_system));
  return j.dump(2) + "\n";
}

std::string bench_trials_to_json(const BenchReport& report) {
  json trials = json::array();
  for (const TrialRecord& t : report.trials) {
    json jt;
    jt["trial_id"] = t.trial_id;
    jt["failed"] = t.failed;
    if (t.failed) jt["error"] = t.error;
    jt["system_hash"] = t.system_hash;
    jt["A"] = matrix_to_json(t.A);
    jt["B"] = matrix_to_json(t.B);
    jt["Q_bar"] = matrix_to_json(t.Q_bar);
    jt["system_rejections"] = t.system_rejections;
    jt["cost_rejections"] = t.cost_rejections;
    json outcomes = json::array();
    for (const MethodOutcome& o : t.outcomes) {
      json jo;
      jo["M"] = o.M;
      jo["method"] = std::string(to_string(o.method));
      jo["failed"] = o.failed;
      if (o.failed) jo["error"] = o.error;
      jo["rel_error"] = o.rel_error;
      jo["converged"] = o.converged;
      jo["Q_hat"] = matrix_to_json(o.Q_hat);
      outcomes.push_back(std::move(jo));
    }
    jt["outcomes"] = std::move(outcomes);
    trials.push_back(std::move(jt));
  }
  json j;
  j["config"] = json::parse(bench_config_to_json(report.config));
  j["trials"] = std::move(trials);
  return j.dump(2) + "\n";
}

}  // namespace ioc
