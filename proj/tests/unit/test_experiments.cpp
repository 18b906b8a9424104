#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lieprop/experiments.hpp"
#include "lieprop/random.hpp"
#include "support/oracles.hpp"

namespace lieprop {
namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lieprop_" + name)).string();
}

Matrix sample_covariance(const std::vector<Vector>& xs) {
  Vector mean = Vector::Zero(xs.front().size());
  for (const auto& x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  Matrix c = Matrix::Zero(mean.size(), mean.size());
  for (const auto& x : xs) c += (x - mean) * (x - mean).transpose();
  return c / static_cast<double>(xs.size() - 1);
}

TEST(TauGrid, LogSpacedWithEndpoints) {
  const auto g = log_tau_grid(1e-3, 1.0, 13);
  ASSERT_EQ(g.size(), 13u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(std::log10(g[i] / g[i - 1]), 0.25, 1e-12);
  EXPECT_THROW(log_tau_grid(0.0, 1.0, 3), std::invalid_argument);
}

TEST(Prior, MeanAndCovariance) {
  const auto prior = build_prior();
  EXPECT_LT((oracle::rotlog(Matrix3d(prior.mean)) - Vector3d(M_PI / 3, M_PI / 4, M_PI / 6)).norm(),
            1e-12);
  Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(prior.cov).eigenvalues();
  EXPECT_NEAR(ev(0), 0.5, 1e-15);
  EXPECT_NEAR(ev(1), 0.8, 1e-15);
  EXPECT_NEAR(ev(2), 1.0, 1e-15);
}

TEST(Prior, FlaggedAsMarginal) {
  EXPECT_TRUE(concentration_warning(build_prior()).has_value());
  EXPECT_FALSE(concentration_warning({Matrix::Identity(3, 3), 0.1 * Matrix::Identity(3, 3)}));
  const auto r = run_sweep({ObservationKind::kGroup, 1, {0.1}, 1});
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(ObserveEuclidean, IdentityRotation) {
  Vector expected(6);
  expected << 0, 0, -9.82, 0.33, 0, -0.95;
  EXPECT_LT((accel_mag(Matrix::Identity(3, 3)) - expected).norm(), 1e-15);
}

TEST(ObserveEuclidean, HalfTurnAboutVertical) {
  const Matrix3d R = Vector3d(-1.0, -1.0, 1.0).asDiagonal();
  Vector expected(6);
  expected << 0, 0, -9.82, -0.33, 0, -0.95;
  EXPECT_LT((accel_mag(R) - expected).norm(), 1e-15);
  EXPECT_LT((accel_mag(oracle::rot(Vector3d(0, 0, M_PI))) - expected).norm(), 1e-14);
}

TEST(ObserveEuclidean, NoiseCovariance) {
  const Matrix3d R = oracle::rot(Vector3d(0.2, -0.4, 1.0));
  const double tau = 0.5;
  std::vector<Vector> xs;
  for (std::uint64_t i = 0; i < 100000; ++i) xs.push_back(observe_euclidean(R, tau, derive_seed(7, {i})));
  const Matrix Q = accel_mag_covariance(tau);
  EXPECT_LT((sample_covariance(xs) - Q).norm() / Q.norm(), 0.03);
}

TEST(ObserveGroup, NoiseCovariance) {
  const Matrix3d R = oracle::rot(Vector3d(0.2, -0.4, 1.0));
  const double tau = 0.01;
  std::vector<Vector> xs;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    xs.push_back(oracle::rotlog(Matrix3d(R.transpose() * observe_group(R, tau, derive_seed(7, {i})))));
  }
  const Matrix Q = rotation_noise_covariance(tau);
  EXPECT_LT((sample_covariance(xs) - Q).norm() / Q.norm(), 0.03);
}

TEST(ObserveGroup, VanishingNoiseAndReproducibility) {
  const Matrix3d R = oracle::rot(Vector3d(0.2, -0.4, 1.0));
  EXPECT_LT((observe_group(R, 1e-20, 3) - R).norm(), 1e-10);
  EXPECT_EQ(observe_group(R, 0.1, 99), observe_group(R, 0.1, 99));
  EXPECT_NE(observe_group(R, 0.1, 99), observe_group(R, 0.1, 100));
  EXPECT_EQ(observe_euclidean(R, 0.1, 99), observe_euclidean(R, 0.1, 99));
}

TEST(Sweep, SingleNearlyNoiselessSampleIsRecovered) {
  const auto r = run_sweep({ObservationKind::kGroup, 1, {1e-30}, 5});
  ASSERT_EQ(r.records.size(), 1u);
  const auto& rec = r.records.front();
  EXPECT_LT(rec.c1_plain, 1e-28);
  EXPECT_LT(rec.c1_mod, 1e-28);
  EXPECT_LT(rec.c2_plain, 1e-28);
  EXPECT_LT(rec.c2_mod, 1e-28);
  EXPECT_EQ(r.excluded, 0u);
}

// The prior leaves ~0.5% of its mass outside the log domain, so runs need
// enough truths for the 1% rejection bound to be meaningful.
TEST(Sweep, RecordsAreValidAndOrdered) {
  for (auto kind : {ObservationKind::kGroup, ObservationKind::kEuclidean}) {
    const auto r = run_sweep({kind, 2000, log_tau_grid(1e-3, 1.0, 5), 11});
    ASSERT_EQ(r.records.size(), 5u);
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& rec = r.records[i];
      if (i > 0) EXPECT_GT(rec.tau, r.records[i - 1].tau);
      EXPECT_GE(rec.c1_plain, 0.0);
      EXPECT_GE(rec.c1_mod, 0.0);
      EXPECT_GE(rec.c2_plain, 0.0);
      EXPECT_GE(rec.c2_mod, 0.0);
      EXPECT_EQ(rec.wall_ms, 0.0);
    }
    EXPECT_TRUE(r.within_exclusion_bound());
  }
}

TEST(Sweep, DeterministicForFixedSeed) {
  const ExperimentConfig cfg{ObservationKind::kEuclidean, 2000, {0.01, 0.1}, 42};
  const auto a = run_sweep(cfg), b = run_sweep(cfg);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].c1_mod, b.records[i].c1_mod);
    EXPECT_EQ(a.records[i].c2_plain, b.records[i].c2_plain);
  }
  ExperimentConfig other = cfg;
  other.seed = 43;
  EXPECT_NE(run_sweep(other).records[0].c2_plain, a.records[0].c2_plain);
}

TEST(Sweep, StandardErrorShrinksWithSqrtN) {
  double se_n = 0.0, se_2n = 0.0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    se_n += run_sweep({ObservationKind::kGroup, 2000, {0.1}, 100 + rep}).records[0].c2_mod_se;
    se_2n += run_sweep({ObservationKind::kGroup, 4000, {0.1}, 100 + rep}).records[0].c2_mod_se;
  }
  EXPECT_NEAR(se_n / se_2n, std::sqrt(2.0), 0.05 * std::sqrt(2.0));
}

TEST(Sweep, GroupModelModificationDominates) {
  const auto r = run_sweep({ObservationKind::kGroup, 10000, log_tau_grid(1e-3, 1.0, 13), 42});
  for (const auto& rec : r.records) {
    EXPECT_LE(rec.c1_mod, rec.c1_plain) << "tau " << rec.tau;
    EXPECT_LE(rec.c2_mod, rec.c2_plain) << "tau " << rec.tau;
  }
}

TEST(Sweep, RejectsBadConfig) {
  EXPECT_THROW(run_sweep({ObservationKind::kGroup, 0, {0.1}, 1}), std::invalid_argument);
  EXPECT_THROW(run_sweep({ObservationKind::kGroup, 10, {-0.1}, 1}), std::invalid_argument);
  EXPECT_THROW(parse_observation_kind("lie"), std::invalid_argument);
  EXPECT_EQ(parse_observation_kind("group"), ObservationKind::kGroup);
}

TEST(Csv, HeaderOnlyForNoRecords) {
  const auto path = temp_path("empty.csv");
  emit_csv({}, path);
  EXPECT_EQ(slurp(path), "tau,c1_plain,c1_mod,c2_plain,c2_mod,wall_ms\n");
  std::filesystem::remove(path);
}

TEST(Csv, OneLinePerTauAndByteIdenticalReruns) {
  const ExperimentConfig cfg{ObservationKind::kGroup, 2000, log_tau_grid(1e-3, 1.0, 13), 42};
  const auto a = temp_path("a.csv"), b = temp_path("b.csv");
  emit_csv(run_sweep(cfg).records, a);
  emit_csv(run_sweep(cfg).records, b);
  const std::string text = slurp(a);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 14);
  EXPECT_EQ(text, slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Csv, FullPrecisionScientific) {
  TrialRecord r;
  r.tau = 0.1;
  r.c1_plain = 1.0 / 3.0;
  const auto path = temp_path("prec.csv");
  emit_csv({r}, path);
  const std::string text = slurp(path);
  EXPECT_NE(text.find("1.00000000000000006e-01,3.33333333333333315e-01,"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Csv, UnwritablePathNamesThePath) {
  try {
    emit_csv({}, "/nonexistent-dir/x.csv");
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(Gnuplot, ReferencesCsv) {
  const auto path = temp_path("plot.gp");
  emit_gnuplot("results.csv", path, ObservationKind::kGroup);
  const std::string text = slurp(path);
  EXPECT_NE(text.find("'results.csv'"), std::string::npos);
  EXPECT_NE(text.find("set logscale xy"), std::string::npos);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace lieprop
