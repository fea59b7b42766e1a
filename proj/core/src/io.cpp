#include "ioc/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "ioc/errors.hpp"
#include "json_util.hpp"

namespace ioc {

namespace {

using nlohmann::json;
using detail::get_dim;
using detail::get_field;
using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::parse_json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& cell, std::size_t line_no) {
  const std::string s = trim(cell);
  if (s.empty()) {
    throw Error(ErrorCode::kParseError,
                "empty numeric cell on line " + std::to_string(line_no));
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(ErrorCode::kParseError, "bad number '" + s + "' on line " +
                                            std::to_string(line_no));
  }
  return v;
}

long long parse_int(const std::string& cell, std::size_t line_no) {
  const std::string s = trim(cell);
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kParseError, "bad integer '" + s + "' on line " +
                                            std::to_string(line_no));
  }
  return v;
}

void parse_metadata(const std::string& line, BundleKind& kind,
                    NoiseInfo& noise) {
  std::istringstream in(line.substr(1));
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "kind") {
      kind = bundle_kind_from_string(value);
    } else if (key == "snr_db_x" && value != "none") {
      noise.snr_db_x = parse_double(value, 1);
    } else if (key == "snr_db_u" && value != "none") {
      noise.snr_db_u = parse_double(value, 1);
    }
  }
}

}  // namespace

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
  }
}

LtiSystem parse_system_json(const std::string& text) {
  const json j = parse_json(text);
  const Eigen::Index n = get_dim(j, "n");
  const Eigen::Index m = get_dim(j, "m");
  Eigen::MatrixXd A = matrix_from_json(get_field(j, "A"), "A", n, n);
  Eigen::MatrixXd B = matrix_from_json(get_field(j, "B"), "B", n, m);
  return LtiSystem::create(std::move(A), std::move(B));
}

std::string system_to_json(const LtiSystem& sys) {
  json j;
  j["n"] = sys.n();
  j["m"] = sys.m();
  j["A"] = matrix_to_json(sys.A());
  j["B"] = matrix_to_json(sys.B());
  return j.dump(2) + "\n";
}

LtiSystem load_system(const std::filesystem::path& path) {
  return parse_system_json(read_text_file(path));
}

void save_system(const std::filesystem::path& path, const LtiSystem& sys) {
  write_text_file(path, system_to_json(sys));
}

CostMatrix parse_cost_json(const std::string& text) {
  const json j = parse_json(text);
  const Eigen::Index n = get_dim(j, "n");
  double phi = kDefaultPhi;
  if (j.contains("phi")) {
    if (!j["phi"].is_number()) {
      throw Error(ErrorCode::kParseError, "'phi' must be a number");
    }
    phi = j["phi"].get<double>();
  }
  const Eigen::MatrixXd Q = matrix_from_json(get_field(j, "Q"), "Q", n, n);
  return CostMatrix::create(Q, phi);
}

std::string cost_to_json(const CostMatrix& cost) {
  json j;
  j["n"] = cost.n();
  j["phi"] = cost.phi();
  j["Q"] = matrix_to_json(cost.matrix());
  return j.dump(2) + "\n";
}

CostMatrix load_cost(const std::filesystem::path& path) {
  return parse_cost_json(read_text_file(path));
}

void save_cost(const std::filesystem::path& path, const CostMatrix& cost) {
  write_text_file(path, cost_to_json(cost));
}

Eigen::VectorXd parse_vector_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::kParseError, "expected a nonempty JSON array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kParseError, "vector entries must be numbers");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

TrajectoryBundle parse_bundle_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  BundleKind kind = BundleKind::kExact;
  NoiseInfo noise;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      parse_metadata(t, kind, noise);
      continue;
    }
    header = split(t, ',');
    break;
  }
  if (header.empty()) {
    throw Error(ErrorCode::kParseError, "trajectory CSV has no header");
  }
  if (header.size() < 4 || trim(header[0]) != "episode" || trim(header[1]) != "t") {
    throw Error(ErrorCode::kParseError,
                "header must start with 'episode,t' and list x and u columns");
  }
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  for (std::size_t c = 2; c < header.size(); ++c) {
    const std::string h = trim(header[c]);
    const std::string expect_x = "x" + std::to_string(n + 1);
    const std::string expect_u = "u" + std::to_string(m + 1);
    if (m == 0 && h == expect_x) {
      ++n;
    } else if (h == expect_u) {
      ++m;
    } else {
      throw Error(ErrorCode::kParseError, "unexpected header column '" + h + "'");
    }
  }
  if (n == 0 || m == 0) {
    throw Error(ErrorCode::kParseError, "header needs x and u columns");
  }

  struct Row {
    long long episode;
    long long t;
    Eigen::VectorXd x;
    Eigen::VectorXd u;
    bool has_u;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split(t, ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    Row r{parse_int(cells[0], line_no), parse_int(cells[1], line_no),
          Eigen::VectorXd(n), Eigen::VectorXd(m), true};
    for (Eigen::Index k = 0; k < n; ++k) {
      r.x(k) = parse_double(cells[static_cast<std::size_t>(2 + k)], line_no);
    }
    std::size_t empty_u = 0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const std::string& c = cells[static_cast<std::size_t>(2 + n + k)];
      if (trim(c).empty()) {
        ++empty_u;
        r.u(k) = 0.0;
      } else {
        r.u(k) = parse_double(c, line_no);
      }
    }
    if (empty_u != 0 && empty_u != static_cast<std::size_t>(m)) {
      throw Error(ErrorCode::kParseError,
                  "partially empty input cells on line " + std::to_string(line_no));
    }
    r.has_u = empty_u == 0;
    rows.push_back(std::move(r));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kParseError, "trajectory CSV has no data rows");
  }

  // Rows must be grouped by episode (1, 2, ...) with t running 1..N.
  std::vector<Episode> episodes;
  std::size_t pos = 0;
  Eigen::Index N = -1;
  long long expected_episode = 1;
  while (pos < rows.size()) {
    std::size_t end = pos;
    while (end < rows.size() && rows[end].episode == rows[pos].episode) ++end;
    if (rows[pos].episode != expected_episode) {
      throw Error(ErrorCode::kParseError,
                  "episodes must be numbered consecutively from 1");
    }
    const auto len = static_cast<Eigen::Index>(end - pos);
    if (N < 0) N = len;
    if (len != N) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "episode " + std::to_string(expected_episode) + " has " +
                      std::to_string(len) + " rows, expected " + std::to_string(N));
    }
    if (N < 2) {
      throw Error(ErrorCode::kDimensionMismatch, "episodes need N >= 2");
    }
    Episode e{Eigen::MatrixXd(n, N), Eigen::MatrixXd(m, N - 1)};
    for (Eigen::Index t = 0; t < N; ++t) {
      const Row& r = rows[pos + static_cast<std::size_t>(t)];
      if (r.t != t + 1) {
        throw Error(ErrorCode::kParseError, "time index must run from 1 to N");
      }
      e.x.col(t) = r.x;
      if (t + 1 < N) {
        if (!r.has_u) {
          throw Error(ErrorCode::kParseError, "missing input before t = N");
        }
        e.u.col(t) = r.u;
      } else if (r.has_u) {
        throw Error(ErrorCode::kParseError, "input cells must be empty at t = N");
      }
    }
    episodes.push_back(std::move(e));
    pos = end;
    ++expected_episode;
  }
  return TrajectoryBundle(std::move(episodes), kind, std::move(noise));
}

std::string bundle_to_csv(const TrajectoryBundle& bundle) {
  std::ostringstream out;
  const auto snr = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("none");
  };
  out << "# kind=" << to_string(bundle.kind())
      << " snr_db_x=" << snr(bundle.noise().snr_db_x)
      << " snr_db_u=" << snr(bundle.noise().snr_db_u) << "\n";
  out << "episode,t";
  for (Eigen::Index k = 0; k < bundle.n(); ++k) out << ",x" << k + 1;
  for (Eigen::Index k = 0; k < bundle.m(); ++k) out << ",u" << k + 1;
  out << "\n";
  for (std::size_t i = 0; i < bundle.M(); ++i) {
    const Episode& e = bundle.episode(i);
    for (Eigen::Index t = 0; t < bundle.N(); ++t) {
      out << i + 1 << "," << t + 1;
      for (Eigen::Index k = 0; k < bundle.n(); ++k) {
        out << "," << format_double(e.x(k, t));
      }
      for (Eigen::Index k = 0; k < bundle.m(); ++k) {
        out << ",";
        if (t + 1 < bundle.N()) out << format_double(e.u(k, t));
      }
      out << "\n";
    }
  }
  return out.str();
}

TrajectoryBundle load_bundle(const std::filesystem::path& path) {
  return parse_bundle_csv(read_text_file(path));
}

void save_bundle(const std::filesystem::path& path,
                 const TrajectoryBundle& bundle) {
  write_text_file(path, bundle_to_csv(bundle));
}

}  // namespace ioc
