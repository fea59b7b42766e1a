#pragma once

// JSON helpers shared by the serializers. nlohmann::json stays out of the
// public headers.

#include <string>

#include <Eigen/Dense>

#include "json.hpp"

#include "ioc/errors.hpp"

namespace ioc::detail {

using nlohmann::json;

inline json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j, const char* name,
                                 Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw Error(ErrorCode::kParseError,
                std::string(name) + " must be an array of " +
                    std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kParseError,
                  std::string(name) + " row " + std::to_string(i) +
                      " must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) {
        throw Error(ErrorCode::kParseError,
                    std::string(name) + " entries must be numbers");
      }
      M(i, k) = v.get<double>();
    }
  }
  return M;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

inline Eigen::Index get_dim(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer()) {
    throw Error(ErrorCode::kParseError,
                std::string("missing integer field '") + key + "'");
  }
  const auto v = j[key].get<long long>();
  if (v <= 0) {
    throw Error(ErrorCode::kParseError,
                std::string("field '") + key + "' must be positive");
  }
  return static_cast<Eigen::Index>(v);
}

inline const json& get_field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kParseError,
                std::string("missing field '") + key + "'");
  }
  return j[key];
}

}  // namespace ioc::detail
