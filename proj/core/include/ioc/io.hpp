#pragma once

#include <filesystem>
#include <string>

#include "ioc/types.hpp"

namespace ioc {

// System JSON: {"n": int, "m": int, "A": [[row-major]], "B": [[...]]}
// Cost JSON:   {"n": int, "phi": float, "Q": [[...]]}
// Trajectory CSV: optional "# kind=... snr_db_x=... snr_db_u=..." line, then
// header "episode,t,x1..xn,u1..um" and one row per (episode, t), t = 1..N,
// with the u cells left empty at t = N. Episodes and t are 1-based.

LtiSystem parse_system_json(const std::string& text);
std::string system_to_json(const LtiSystem& sys);
LtiSystem load_system(const std::filesystem::path& path);
void save_system(const std::filesystem::path& path, const LtiSystem& sys);

CostMatrix parse_cost_json(const std::string& text);
std::string cost_to_json(const CostMatrix& cost);
CostMatrix load_cost(const std::filesystem::path& path);
void save_cost(const std::filesystem::path& path, const CostMatrix& cost);

TrajectoryBundle parse_bundle_csv(const std::string& text);
std::string bundle_to_csv(const TrajectoryBundle& bundle);
TrajectoryBundle load_bundle(const std::filesystem::path& path);
void save_bundle(const std::filesystem::path& path,
                 const TrajectoryBundle& bundle);

/// Parses a JSON array of numbers, e.g. "[1, 2, 3]" (used for --x0).
Eigen::VectorXd parse_vector_json(const std::string& text);

/// Decimal text with 17 significant digits; round-trips every double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ioc
