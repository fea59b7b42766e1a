#include "ioc/trajectories.hpp"

#include <cmath>
#include <limits>

#include "ioc/errors.hpp"
#include "ioc/forward_lqr.hpp"
#include "ioc/random.hpp"

namespace ioc {

namespace {

// Stream ids inside one episode.
constexpr std::uint64_t kInitialStateStream = 0;
constexpr std::uint64_t kStateNoiseStream = 1;
constexpr std::uint64_t kInputNoiseStream = 2;

Eigen::MatrixXd gaussian_like(const Eigen::MatrixXd& shape, double sigma,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd out(shape.rows(), shape.cols());
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = sigma * dist(rng);
  }
  return out;
}

}  // namespace

InputReconstruction inputs_from_states(const LtiSystem& sys,
                                       const Eigen::MatrixXd& x) {
  if (x.rows() != sys.n() || x.cols() < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "states must be n x N, N >= 2");
  }
  const Eigen::Index N = x.cols();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.B());
  InputReconstruction out{Eigen::MatrixXd(sys.m(), N - 1),
                          Eigen::VectorXd(N - 1), 0.0};
  for (Eigen::Index t = 0; t + 1 < N; ++t) {
    const Eigen::VectorXd d = x.col(t + 1) - sys.A() * x.col(t);
    out.u.col(t) = qr.solve(d);
    out.residual_norms(t) = (d - sys.B() * out.u.col(t)).norm();
  }
  out.max_residual = out.residual_norms.size() ? out.residual_norms.maxCoeff() : 0.0;
  return out;
}

InitialStateSampler uniform_initial_states(Eigen::Index n, double lo, double hi) {
  return [n, lo, hi](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = dist(rng);
    return x;
  };
}

TrajectoryBundle generate_bundle(const LtiSystem& sys, const CostMatrix& Q,
                                 Eigen::Index N, std::size_t M,
                                 const InitialStateSampler& sampler,
                                 std::uint64_t seed) {
  if (M < 1) throw Error(ErrorCode::kInvalidArgument, "M must be >= 1");
  if (Q.n() != sys.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "cost and system sizes differ");
  }
  const GainSchedule gains = solve_riccati(sys, Q, N);
  std::vector<Episode> episodes;
  episodes.reserve(M);
  for (std::size_t i = 0; i < M; ++i) {
    auto rng = make_rng(seed, i, kInitialStateStream);
    const Eigen::VectorXd x_bar = sampler(rng);
    if (x_bar.size() != sys.n()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "sampler returned a vector of the wrong size");
    }
    episodes.push_back(simulate(sys, gains, x_bar));
  }
  return TrajectoryBundle(std::move(episodes), BundleKind::kExact);
}

double realized_snr_db(const Eigen::MatrixXd& signal,
                       const Eigen::MatrixXd& noise) {
  const double pn = noise.squaredNorm();
  if (pn == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal.squaredNorm() / pn);
}

TrajectoryBundle add_noise(const TrajectoryBundle& bundle,
                           std::optional<double> snr_db_x,
                           std::optional<double> snr_db_u, std::uint64_t seed) {
  if (bundle.kind() != BundleKind::kExact) {
    throw Error(ErrorCode::kInvalidArgument, "add_noise expects an exact bundle");
  }
  if (!snr_db_x && !snr_db_u) return bundle;

  NoiseInfo noise;
  noise.snr_db_x = snr_db_x;
  noise.snr_db_u = snr_db_u;
  std::vector<Episode> episodes;
  episodes.reserve(bundle.M());
  const Eigen::Index N = bundle.N();
  for (std::size_t i = 0; i < bundle.M(); ++i) {
    Episode e = bundle.episode(i);
    if (snr_db_x) {
      const Eigen::MatrixXd signal = e.x.rightCols(N - 1);
      const double power = signal.squaredNorm() / static_cast<double>(signal.size());
      const double sigma = std::sqrt(power / std::pow(10.0, *snr_db_x / 10.0));
      auto rng = make_rng(seed, i, kStateNoiseStream);
      const Eigen::MatrixXd v = gaussian_like(signal, sigma, rng);
      e.x.rightCols(N - 1) += v;
      noise.realized_snr_x.push_back(realized_snr_db(signal, v));
    }
    if (snr_db_u) {
      const Eigen::MatrixXd signal = e.u;
      const double power = signal.squaredNorm() / static_cast<double>(signal.size());
      const double sigma = std::sqrt(power / std::pow(10.0, *snr_db_u / 10.0));
      auto rng = make_rng(seed, i, kInputNoiseStream);
      const Eigen::MatrixXd w = gaussian_like(signal, sigma, rng);
      e.u += w;
      noise.realized_snr_u.push_back(realized_snr_db(signal, w));
    }
    episodes.push_back(std::move(e));
  }
  BundleKind kind = BundleKind::kNoisyBoth;
  if (!snr_db_u) kind = BundleKind::kNoisyState;
  if (!snr_db_x) kind = BundleKind::kNoisyInput;
  return TrajectoryBundle(std::move(episodes), kind, std::move(noise));
}

}  // namespace ioc
