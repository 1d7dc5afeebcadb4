#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_util.hpp"
#include "tbss/io.hpp"
#include "tbss/polyroots.hpp"
#include "tbss/synth.hpp"

using namespace tbss;

TEST(Rng, KnownStream) {
  // mt19937_64 with the default seed 5489 yields 14514284786278117030 first.
  Rng a(5489);
  EXPECT_EQ(a.uniform(), static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
  Rng b(7), c(7);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(b.normal(), c.normal());
  const Eigen::MatrixXd q = Rng(3).orthogonal(5);
  EXPECT_LE((q.transpose() * q - Eigen::MatrixXd::Identity(5, 5)).norm(), 1e-13);
}

TEST(Generate, Distributions) {
  GenConfig cfg;
  cfg.sources = 3;
  cfg.dists = {SourceDist::kBpsk, SourceDist::kUniform, SourceDist::kGaussian};
  cfg.mixing = MixingKind::kIdentity;
  cfg.nsamples = 20000;
  cfg.seed = 1;
  const auto d = generate(cfg);
  EXPECT_EQ(d.samples, d.sources);
  for (Eigen::Index s = 0; s < d.sources.rows(); ++s) {
    EXPECT_EQ(std::abs(d.sources(s, 0)), 1.0);
    EXPECT_LE(std::abs(d.sources(s, 1)), std::sqrt(3.0));
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.sources.col(i).squaredNorm() / 20000, 1.0, 0.05);
}

TEST(Generate, DeterministicAndMixed) {
  GenConfig cfg;
  cfg.sources = 2;
  cfg.sensors = 3;
  cfg.mixing = MixingKind::kGeneral;
  cfg.noise_variance = 0.0;
  cfg.nsamples = 50;
  cfg.seed = 9;
  const auto a = generate(cfg), b = generate(cfg);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_LE((a.samples - a.sources * a.mixing.transpose()).norm(), 1e-13);
  cfg.seed = 10;
  EXPECT_NE(generate(cfg).samples, a.samples);
  cfg.noise_variance = 0.25;
  cfg.nsamples = 40000;
  const auto n = generate(cfg);
  const Eigen::MatrixXd noise = n.samples - n.sources * n.mixing.transpose();
  EXPECT_NEAR(noise.squaredNorm() / (40000 * 3), 0.25, 0.01);
  cfg.noise_variance = -1;
  EXPECT_THROW(generate(cfg), std::invalid_argument);
  EXPECT_THROW(parse_distribution("laplace"), std::invalid_argument);
  EXPECT_THROW(parse_mixing("weird"), std::invalid_argument);
  EXPECT_EQ(distribution_name(parse_distribution("bpsk")), "bpsk");
  EXPECT_EQ(mixing_name(parse_mixing("given")), "given");
}

TEST(Generate, OrthogonalMixing) {
  GenConfig cfg;
  cfg.sources = 4;
  cfg.seed = 2;
  const auto d = generate(cfg);
  EXPECT_LE((d.mixing.transpose() * d.mixing - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-13);
}

TEST(Score, InverseAndQuotientInvariance) {
  Rng rng(3);
  const Eigen::MatrixXd a = rng.normal_matrix(3, 3);
  const auto s = score(a.inverse(), a);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.dominance(i), 1.0, 1e-12);
  EXPECT_LE(s.max_angle, 1e-6);
  Eigen::PermutationMatrix<3> p;
  p.indices() << 2, 0, 1;
  const Eigen::MatrixXd lam = Eigen::Vector3d(-2.0, 0.5, 7.0).asDiagonal();
  const Eigen::MatrixXd w = rng.normal_matrix(3, 3);
  const auto s1 = score(w, a), s2 = score(p * lam * w, a);
  EXPECT_NEAR(s1.min_dominance, s2.min_dominance, 1e-14);
  EXPECT_NEAR(s1.mean_dominance, s2.mean_dominance, 1e-14);
  EXPECT_NEAR(s1.max_angle, s2.max_angle, 1e-12);
  EXPECT_THROW(score(rng.normal_matrix(3, 2), a), std::invalid_argument);
}

TEST(Score, RandomSeparatorBaseline) {
  Rng rng(4);
  const int n = 6;
  double mean = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) mean += score(rng.normal_matrix(n, n), Eigen::MatrixXd::Identity(n, n)).mean_dominance;
  mean /= trials;
  // The largest of n Gaussian magnitudes relative to the row norm sits a bit
  // above 1/sqrt(n) and well below 1.
  EXPECT_GT(mean, 1.0 / std::sqrt(n));
  EXPECT_LT(mean, 0.8);
}

TEST(CircleMixture, Law) {
  const auto z = circle_mixture(10000, 5);
  int zeros = 0;
  for (Eigen::Index s = 0; s < z.rows(); ++s) {
    const double r = z.row(s).norm();
    if (r == 0.0) ++zeros;
    else EXPECT_NEAR(r, 1.0, 1e-12);
  }
  EXPECT_NEAR(zeros / 10000.0, 0.5, 0.03);
}

TEST(PolyRoots, CompanionAndInfinity) {
  const auto r = polynomial_roots(Eigen::Vector3d(-2, 0, 1));  // t^2 - 2
  ASSERT_EQ(r.finite.size(), 2u);
  EXPECT_EQ(r.infinite, 0);
  for (const auto& t : r.finite) EXPECT_NEAR(std::abs(t * t - 2.0), 0.0, 1e-14);
  const auto s = polynomial_roots(Eigen::Vector3d(1, 1, 0));
  EXPECT_EQ(s.finite.size(), 1u);
  EXPECT_EQ(s.infinite, 1);
  EXPECT_NEAR(polyval(Eigen::Vector3d(1, 2, 3), 2.0), 17.0, 1e-15);
}

TEST(Csv, RoundTripAndHeader) {
  Rng rng(6);
  const Eigen::MatrixXd m = rng.normal_matrix(7, 3);
  std::stringstream ss;
  io::write_csv(ss, m);
  EXPECT_EQ(ss.str().substr(0, 9), "y1,y2,y3\n");
  EXPECT_EQ(io::read_csv(ss), m);
  std::stringstream plain("1,2\n3,4\n");
  EXPECT_EQ(io::read_csv(plain), (Eigen::MatrixXd(2, 2) << 1, 2, 3, 4).finished());
  std::stringstream bad("a,b\n1,2\n3\n");
  EXPECT_THROW(io::read_csv(bad), std::invalid_argument);
}

TEST(Json, TensorRoundTrips) {
  Rng rng(7);
  const auto t = tbss::testing::random_dense(rng, {2, 3, 2});
  EXPECT_EQ(io::tensor_from_json(io::tensor_to_json(t)), t);
  const auto s = tbss::testing::random_sym(rng, 3, 3);
  const auto js = io::sym_tensor_to_json(s);
  EXPECT_TRUE(js["sym"].get<bool>());
  EXPECT_EQ(io::sym_tensor_from_json(js), s);
  // Dense symmetric input is accepted as a symmetric tensor; asymmetric is not.
  EXPECT_EQ(io::sym_tensor_from_json(io::tensor_to_json(s.expand())), s);
  EXPECT_THROW(io::sym_tensor_from_json(io::tensor_to_json(t)), std::invalid_argument);
  EXPECT_EQ(io::tensor_from_json(js), s.expand());
}

TEST(Json, PolyQuanticKruskal) {
  HomogPoly p(2, 3);
  p.add_monomial({2, 1}, 6.0);
  const auto jp = io::poly_to_json(p);
  EXPECT_EQ(io::poly_from_json(jp).coeffs(), p.coeffs());
  const auto q = io::quantic_from_json(jp);
  EXPECT_EQ(q.gamma, Eigen::Vector4d(0, 0, 2, 0));
  EXPECT_EQ(io::quantic_from_json(io::quantic_to_json(q)).gamma, q.gamma);
  Rng rng(8);
  KruskalFactors f{rng.normal_matrix(2, 2), rng.normal_matrix(3, 2), rng.normal_matrix(2, 2), Eigen::Vector2d(1, 2)};
  const auto g = io::kruskal_from_json(io::kruskal_to_json(f));
  EXPECT_EQ(g.A, f.A);
  EXPECT_EQ(g.lambda, f.lambda);
  EXPECT_EQ(io::complex_to_json({1.5, -2.0}), io::Json::parse("[1.5,-2.0]"));
}
