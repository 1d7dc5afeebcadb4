#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "tbss/preprocess.hpp"

using namespace tbss;

namespace {

Eigen::MatrixXd random_spd(Rng& rng, int n) {
  const Eigen::MatrixXd g = rng.normal_matrix(n, n);
  return g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST(Standardize, IdentityAndDiagonal) {
  EXPECT_LE((standardize(Eigen::MatrixXd::Identity(3, 3)).transform - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
  const Eigen::Vector3d lam(4.0, 0.25, 9.0);
  const auto w = standardize(lam.asDiagonal().toDenseMatrix());
  EXPECT_LE((w.transform - Eigen::Vector3d(0.5, 2.0, 1.0 / 3).asDiagonal().toDenseMatrix()).norm(), 1e-14);
  EXPECT_EQ(w.source_count, 3);
}

TEST(Standardize, RandomSpdIsWhitened) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const Eigen::MatrixXd r = random_spd(rng, n);
    const Eigen::MatrixXd t = standardize(r).transform;
    EXPECT_LE((t * r * t.transpose() - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    EXPECT_LE((t - t.transpose()).norm(), 1e-10);  // symmetric square root
  }
}

TEST(Standardize, RejectsSingularAndAsymmetric) {
  Eigen::Matrix2d sing;
  sing << 1, 1, 1, 1;
  EXPECT_THROW(standardize(sing), NumericalError);
  Eigen::Matrix2d asym;
  asym << 1, 0.5, 0, 1;
  EXPECT_THROW(standardize(asym), std::invalid_argument);
}

TEST(Standardize, WhitenedSamplesHaveIdentityCovariance) {
  Rng rng(2);
  const Eigen::MatrixXd a = rng.normal_matrix(4, 4);
  const Eigen::MatrixXd y = rng.normal_matrix(1000, 4) * a.transpose();
  const Eigen::MatrixXd t = standardize(sample_covariance(y)).transform;
  EXPECT_LE((sample_covariance(y * t.transpose()) - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-8);
}

TEST(StandardizeWithNoise, ZeroNoiseAndKnownMixing) {
  Rng rng(3);
  const Eigen::MatrixXd r = random_spd(rng, 3);
  EXPECT_LE((standardize_with_noise(r, Eigen::MatrixXd::Zero(3, 3)).transform - standardize(r).transform).norm(), 1e-12);
  const Eigen::MatrixXd a = rng.normal_matrix(3, 3);
  const double sigma = 0.3;
  const Eigen::MatrixXd ry = a * a.transpose() + sigma * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd t = standardize_with_noise(ry, sigma * Eigen::MatrixXd::Identity(3, 3)).transform;
  const Eigen::MatrixXd ta = t * a;
  EXPECT_LE((ta * ta.transpose() - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-10);
}

TEST(StandardizeWithNoise, NoiseAboveSignalIsRejected) {
  EXPECT_THROW(standardize_with_noise(Eigen::MatrixXd::Identity(2, 2), 2.0 * Eigen::MatrixXd::Identity(2, 2)),
               NumericalError);
}

TEST(DetectSources, Examples) {
  Rng rng(4);
  const Eigen::MatrixXd a = rng.normal_matrix(5, 3);
  const auto det = detect_sources(a * a.transpose() + 0.01 * Eigen::MatrixXd::Identity(5, 5));
  EXPECT_EQ(det.sources, 3);
  EXPECT_EQ(det.whitener.transform.rows(), 3);
  EXPECT_EQ(det.whitener.transform.cols(), 5);
  EXPECT_NEAR(det.sigma, 0.01, 1e-12);
  // Signal part is whitened: T A A^T T^T = I.
  const Eigen::MatrixXd ta = det.whitener.transform * a;
  EXPECT_LE((ta * ta.transpose() - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-8);

  EXPECT_EQ(detect_sources(0.7 * Eigen::MatrixXd::Identity(4, 4)).sources, 0);
  const auto full = detect_sources(random_spd(rng, 4), std::nullopt, 0.1, 0.0);
  EXPECT_EQ(full.sources, 4);
}

TEST(DetectSources, CountsRankAcrossTrials) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 4, p = 1 + trial % (n - 1);
    const Eigen::MatrixXd a = rng.normal_matrix(n, p);
    // Noise 10 dB below the weakest signal direction.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
    const double sigma = 0.1 * es.eigenvalues()(0);
    const Eigen::MatrixXd ry = a * a.transpose() + sigma * Eigen::MatrixXd::Identity(n, n);
    const auto det = detect_sources(ry, std::nullopt, 0.1);
    EXPECT_EQ(det.sources, p) << "trial " << trial;
    EXPECT_EQ(det.whitener.transform.rows(), det.sources);
  }
}

TEST(DetectSources, ColoredNoiseIsWhitenedFirst) {
  Rng rng(6);
  const Eigen::MatrixXd a = rng.normal_matrix(4, 2);
  const Eigen::MatrixXd rv = random_spd(rng, 4) * 0.01;
  const auto det = detect_sources(a * a.transpose() + rv, rv);
  EXPECT_EQ(det.sources, 2);
  EXPECT_NEAR(det.sigma, 1.0, 1e-8);
}
