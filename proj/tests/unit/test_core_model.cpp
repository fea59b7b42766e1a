#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "ioc/errors.hpp"
#include "ioc/forward_lqr.hpp"
#include "ioc/io.hpp"
#include "ioc/trajectories.hpp"
#include "ioc/vectorization.hpp"
#include "support/oracles.hpp"
#include "support/three_state_example.hpp"

namespace ioc {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ioc::Error thrown";
  return ErrorCode::kIoError;
}

TEST(Vec, ColumnMajor) {
  Eigen::MatrixXd M(2, 2);
  M << 1, 3, 2, 4;
  EXPECT_EQ(vec(M), (Eigen::VectorXd(4) << 1, 2, 3, 4).finished());
  EXPECT_EQ(vec(Eigen::MatrixXd::Zero(2, 2)), Eigen::VectorXd::Zero(4));
  EXPECT_EQ(unvec(vec(M), 2, 2), M);
}

TEST(Vec, KroneckerIdentityOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd G1 = testing::random_normal(2, 3, rng);
    const Eigen::MatrixXd G2 = testing::random_normal(3, 3, rng);
    const Eigen::MatrixXd G3 = testing::random_normal(3, 2, rng);
    const Eigen::VectorXd lhs = vec(G1 * G2 * G3);
    const Eigen::VectorXd rhs = kron(G3.transpose(), G1) * vec(G2);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Vech, LowerTriangleColumnMajor) {
  Eigen::MatrixXd S(2, 2);
  S << 1, 2, 2, 3;
  EXPECT_EQ(vech(S), (Eigen::VectorXd(3) << 1, 2, 3).finished());
  EXPECT_EQ(vech(Eigen::MatrixXd::Identity(2, 2)), (Eigen::VectorXd(3) << 1, 0, 1).finished());
}

TEST(Vech, RejectsAsymmetricInput) {
  Eigen::MatrixXd S(2, 2);
  S << 1, 2, 2.001, 3;
  EXPECT_EQ(code_of([&] { vech(S); }), ErrorCode::kAsymmetricInput);
}

TEST(Vech, RoundTripOnRandomSymmetric) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd S = testing::random_symmetric(1 + trial % 6, rng);
    EXPECT_EQ(unvech(vech(S)), S);
  }
}

TEST(Duplication, ExhaustiveBasisUpToFour) {
  for (Eigen::Index n = 1; n <= 4; ++n) {
    const DuplicationMap map = DuplicationMap::create(n);
    ASSERT_EQ(map.D.rows(), n * n);
    ASSERT_EQ(map.D.cols(), vech_size(n));
    for (Eigen::Index r = 0; r < map.D.rows(); ++r) {
      EXPECT_EQ((map.D.row(r).array() != 0.0).count(), 1);
      EXPECT_EQ(map.D.row(r).sum(), 1.0);
    }
    for (Eigen::Index k = 0; k < vech_size(n); ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(vech_size(n));
      e(k) = 1.0;
      const Eigen::MatrixXd S = unvech(e);
      EXPECT_EQ(map.D * vech(S), vec(S));
    }
  }
}

TEST(Duplication, RandomUpToTen) {
  std::mt19937_64 rng(5);
  for (Eigen::Index n = 1; n <= 10; ++n) {
    const Eigen::MatrixXd S = testing::random_symmetric(n, rng);
    EXPECT_LE((duplication_matrix(n) * vech(S) - vec(S)).norm(), 1e-14);
  }
}

TEST(Duplication, VechGradientMatchesChainRule) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd G = testing::random_normal(3, 3, rng);
  // f(v) = <G, unvech(v)>, so df/dv = D' vec(G).
  const Eigen::VectorXd expected = duplication_matrix(3).transpose() * vec(G);
  EXPECT_LE((vech_gradient(G) - expected).norm(), 1e-14);
}

TEST(LtiSystem, ReportsWhichCheckFailed) {
  const auto defect = [](Eigen::MatrixXd A, Eigen::MatrixXd B) {
    try {
      LtiSystem::create(std::move(A), std::move(B));
    } catch (const InvalidSystemError& e) {
      return e.defect();
    }
    ADD_FAILURE() << "system accepted";
    return SystemDefect::kNotInvertible;
  };
  const Eigen::MatrixXd e2 = (Eigen::MatrixXd(2, 1) << 0, 1).finished();
  EXPECT_EQ(defect(Eigen::MatrixXd::Identity(2, 2), e2), SystemDefect::kUncontrollable);
  EXPECT_EQ(defect(Eigen::MatrixXd::Zero(2, 2), e2), SystemDefect::kNotInvertible);
  EXPECT_EQ(defect(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 1)),
            SystemDefect::kRankDeficientB);
}

TEST(CostMatrix, EnforcesSymmetryPsdAndBall) {
  EXPECT_EQ(code_of([] { CostMatrix::create(-Eigen::MatrixXd::Identity(2, 2)); }),
            ErrorCode::kInvalidCost);
  EXPECT_EQ(code_of([] { CostMatrix::create(2.0 * Eigen::MatrixXd::Identity(2, 2)); }),
            ErrorCode::kInvalidCost);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  EXPECT_EQ(code_of([&] { CostMatrix::create(asym); }), ErrorCode::kAsymmetricInput);
  const CostMatrix Q = CostMatrix::create(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(Q.phi(), kDefaultPhi);
  EXPECT_EQ(Q.matrix(), Eigen::MatrixXd::Identity(2, 2));
}

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ioc_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(IoTest, UncontrollableSystemJson) {
  const std::string text = R"({"n":2,"m":1,"A":[[1,0],[0,1]],"B":[[0],[1]]})";
  try {
    parse_system_json(text);
    FAIL() << "accepted";
  } catch (const InvalidSystemError& e) {
    EXPECT_EQ(e.defect(), SystemDefect::kUncontrollable);
  }
}

TEST_F(IoTest, ExampleSystemLoads) {
  const LtiSystem sys = LtiSystem::create(testing::example_A(), testing::example_B());
  save_system(dir_ / "sys.json", sys);
  const LtiSystem back = load_system(dir_ / "sys.json");
  EXPECT_EQ(back.n(), 3);
  EXPECT_EQ(back.m(), 1);
  EXPECT_EQ(back.A(), sys.A());
  EXPECT_EQ(back.B(), sys.B());
}

TEST_F(IoTest, MalformedJson) {
  EXPECT_EQ(code_of([] { parse_system_json("{"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_system_json(R"({"n":2,"m":1,"A":[[1,0]],"B":[[0],[1]]})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_cost_json(R"({"n":1,"Q":[[1]],"phi":"x"})"); }),
            ErrorCode::kParseError);
}

TEST_F(IoTest, CostRoundTrip) {
  Eigen::MatrixXd Q(2, 2);
  Q << 1.1234567890123456789, -0.3, -0.3, 1.0 / 3.0;
  const CostMatrix c = CostMatrix::create(Q, 4.5);
  save_cost(dir_ / "q.json", c);
  const CostMatrix back = load_cost(dir_ / "q.json");
  EXPECT_EQ(back.matrix(), c.matrix());
  EXPECT_EQ(back.phi(), 4.5);
}

TEST_F(IoTest, EmptyBundleFile) {
  write_text_file(dir_ / "empty.csv", "");
  EXPECT_EQ(code_of([&] { load_bundle(dir_ / "empty.csv"); }), ErrorCode::kParseError);
}

TEST_F(IoTest, BundleRoundTrip) {
  std::mt19937_64 rng(21);
  const LtiSystem sys = testing::random_system(3, 2, rng);
  const CostMatrix Q = CostMatrix::create(testing::random_psd(3, rng));
  const TrajectoryBundle exact =
      generate_bundle(sys, Q, 5, 2, uniform_initial_states(3), 77);
  EXPECT_LE(exact.max_dynamics_residual(sys), exact.dynamics_tolerance());
  save_bundle(dir_ / "b.csv", exact);
  const TrajectoryBundle back = load_bundle(dir_ / "b.csv");
  ASSERT_EQ(back.M(), 2u);
  ASSERT_EQ(back.N(), 5);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE((back.episode(i).x - exact.episode(i).x).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((back.episode(i).u - exact.episode(i).u).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_NO_THROW(back.validate_against(sys));
}

TEST_F(IoTest, NoisyBundleKeepsMetadata) {
  std::mt19937_64 rng(22);
  const LtiSystem sys = testing::random_system(2, 1, rng);
  const CostMatrix Q = CostMatrix::create(testing::random_psd(2, rng));
  const TrajectoryBundle noisy = add_noise(
      generate_bundle(sys, Q, 6, 3, uniform_initial_states(2), 1), 15.0, std::nullopt, 2);
  const TrajectoryBundle back = parse_bundle_csv(bundle_to_csv(noisy));
  EXPECT_EQ(back.kind(), BundleKind::kNoisyState);
  ASSERT_TRUE(back.noise().snr_db_x.has_value());
  EXPECT_EQ(*back.noise().snr_db_x, 15.0);
  EXPECT_FALSE(back.noise().snr_db_u.has_value());
}

TEST_F(IoTest, BundleShapeErrors) {
  const std::string bad_header = "episode,t,x1,u1\n1,1,0,0\n1,2,0,\n";
  EXPECT_NO_THROW(parse_bundle_csv(bad_header));
  const std::string missing_u = "episode,t,x1,x2,u1\n1,1,0,0,\n1,2,0,0,\n";
  EXPECT_EQ(code_of([&] { parse_bundle_csv(missing_u); }), ErrorCode::kParseError);
  const std::string uneven =
      "episode,t,x1,u1\n1,1,0,0\n1,2,0,\n2,1,0,0\n2,2,0,0\n2,3,0,\n";
  const ErrorCode c = code_of([&] { parse_bundle_csv(uneven); });
  EXPECT_TRUE(c == ErrorCode::kDimensionMismatch || c == ErrorCode::kParseError);
}

TEST(Bundle, ExactInvariantIsEnforced) {
  std::mt19937_64 rng(4);
  const LtiSystem sys = testing::random_system(2, 1, rng);
  const CostMatrix Q = CostMatrix::create(testing::random_psd(2, rng));
  TrajectoryBundle b = generate_bundle(sys, Q, 6, 2, uniform_initial_states(2), 5);
  std::vector<Episode> eps = b.episodes();
  eps[1].x(0, 3) += 1.0;
  const TrajectoryBundle broken(eps);
  EXPECT_EQ(code_of([&] { broken.validate_against(sys); }), ErrorCode::kInvalidArgument);
}

TEST(Bundle, PrefixKeepsNoiseAligned) {
  std::mt19937_64 rng(6);
  const LtiSystem sys = testing::random_system(2, 1, rng);
  const CostMatrix Q = CostMatrix::create(testing::random_psd(2, rng));
  const TrajectoryBundle noisy =
      add_noise(generate_bundle(sys, Q, 8, 5, uniform_initial_states(2), 5), 20.0, 20.0, 6);
  const TrajectoryBundle head = noisy.prefix(3);
  ASSERT_EQ(head.M(), 3u);
  ASSERT_EQ(head.noise().realized_snr_x.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(head.episode(i).x, noisy.episode(i).x);
    EXPECT_EQ(head.noise().realized_snr_u[i], noisy.noise().realized_snr_u[i]);
  }
}

}  // namespace
}  // namespace ioc
