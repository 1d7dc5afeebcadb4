#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "tbss/poly.hpp"

using namespace tbss;
using tbss::testing::random_sym;

namespace {

HomogPoly random_poly(Rng& rng, int n, int d) { return tensor_to_poly(random_sym(rng, n, d)); }

double factorial_d(int n) { return static_cast<double>(factorial(n)); }

}  // namespace

TEST(Poly, ThreeOnesTensorIsThreeXYSquared) {
  DenseTensor t({2, 2, 2});
  t({0, 1, 1}) = t({1, 0, 1}) = t({1, 1, 0}) = 1.0;
  const auto p = tensor_to_poly(symmetrize(t));
  EXPECT_DOUBLE_EQ(p.gamma({1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(p.gamma({3, 0}), 0.0);
  Eigen::Vector2d x(0.7, -1.3);
  EXPECT_NEAR(p(x), 3 * x(0) * x(1) * x(1), 1e-14);
}

TEST(Poly, XCubedHasSingleUnitEntry) {
  HomogPoly p(2, 3);
  p.add_monomial({3, 0}, 1.0);
  const auto t = poly_to_tensor(p);
  EXPECT_EQ(t.entry({0, 0, 0}), 1.0);
  EXPECT_EQ(t.expand().norm(), 1.0);
}

TEST(Poly, RoundTripIsExact) {
  Rng rng(1);
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 5; ++d) {
      const auto s = random_sym(rng, n, d);
      EXPECT_EQ(poly_to_tensor(tensor_to_poly(s)), s);
    }
}

TEST(Poly, EvaluationMatchesTensorContraction) {
  Rng rng(2);
  const auto s = random_sym(rng, 3, 3);
  const Eigen::VectorXd x = rng.normal_vector(3);
  const auto e = s.expand();
  double sum = 0;
  tbss::testing::for_each_index(e.dims(), [&](const std::vector<std::size_t>& i) {
    sum += e(i) * x(static_cast<Eigen::Index>(i[0])) * x(static_cast<Eigen::Index>(i[1])) *
           x(static_cast<Eigen::Index>(i[2]));
  });
  EXPECT_NEAR(tensor_to_poly(s)(x), sum, 1e-12);
}

TEST(Poly, Evaluate) {
  HomogPoly p(2, 3);
  p.add_monomial({3, 0}, 1.0);
  p.add_monomial({0, 3}, 1.0);
  EXPECT_DOUBLE_EQ(p(Eigen::Vector2d(1, 1)), 2.0);
  HomogPoly q(2, 3);
  q.add_monomial({2, 1}, 6.0);
  EXPECT_DOUBLE_EQ(q(Eigen::Vector2d(1, 2)), 12.0);
  EXPECT_EQ(q(Eigen::Vector2d::Zero()), 0.0);
  EXPECT_THROW(q.set_gamma({1, 1}, 1.0), std::invalid_argument);
}

TEST(Poly, MultiplySmallCases) {
  HomogPoly x(2, 1), y(2, 1);
  x.add_monomial({1, 0}, 1.0);
  y.add_monomial({0, 1}, 1.0);
  const auto xy = poly_multiply(x, y);
  EXPECT_EQ(xy.degree(), 2);
  EXPECT_DOUBLE_EQ(xy.gamma({1, 1}), 0.5);  // xy = 2 * gamma * xy
  const auto diff = poly_multiply(x + y, x + (-1.0) * y);
  EXPECT_NEAR(diff.gamma({2, 0}), 1.0, 1e-15);
  EXPECT_NEAR(diff.gamma({0, 2}), -1.0, 1e-15);
  EXPECT_NEAR(diff.gamma({1, 1}), 0.0, 1e-15);
  EXPECT_THROW(poly_multiply(x, HomogPoly(3, 1)), std::invalid_argument);
}

TEST(Poly, MultiplyIsPointwiseAndMatchesSymmetrizedOuter) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 3;
    const auto p = random_poly(rng, n, 2), q = random_poly(rng, n, 1 + trial % 2);
    const auto pq = poly_multiply(p, q);
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd x = rng.normal_vector(n);
      EXPECT_NEAR(pq(x), p(x) * q(x), 1e-12 * (1 + std::abs(p(x) * q(x))));
    }
    const auto sym = symmetrize(outer_product(poly_to_tensor(p).expand(), poly_to_tensor(q).expand()));
    const auto viaT = poly_to_tensor(pq);
    for (std::size_t t = 0; t < sym.packed().size(); ++t) EXPECT_NEAR(viaT.packed()[t], sym.packed()[t], 1e-12);
  }
}

TEST(Apolar, MonomialNorms) {
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 5; ++d)
      for (const auto& j : enumerate_multi_indices(n, d)) {
        HomogPoly m(n, d);
        m.add_monomial(j, 1.0);
        double jfact = 1;
        for (int e : j) jfact *= factorial_d(e);
        EXPECT_NEAR(apolar_inner(m, m), jfact / factorial_d(d), 1e-15);
        EXPECT_NEAR(apolar_inner(m, m), 1.0 / static_cast<double>(multiplicity(j)), 1e-15);
      }
}

TEST(Apolar, DisjointMonomialsAreOrthogonal) {
  HomogPoly a(2, 3), b(2, 3);
  a.add_monomial({3, 0}, 1.0);
  b.add_monomial({0, 3}, 1.0);
  EXPECT_EQ(apolar_inner(a, b), 0.0);
  EXPECT_THROW(apolar_inner(a, HomogPoly(2, 2)), std::invalid_argument);
}

TEST(Apolar, ReproducingProperty) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4, d = 1 + (trial / 4) % 6;
    const Eigen::VectorXd a = rng.normal_vector(n);
    const auto q = random_poly(rng, n, d);
    const double lhs = apolar_inner(linear_form_power(a, d), q), rhs = q(a);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Apolar, SymmetricBilinearPositive) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_poly(rng, 3, 3), q = random_poly(rng, 3, 3), r = random_poly(rng, 3, 3);
    const double s = rng.normal();
    EXPECT_NEAR(apolar_inner(p, q), apolar_inner(q, p), 1e-13);
    EXPECT_NEAR(apolar_inner(s * p + q, r), s * apolar_inner(p, r) + apolar_inner(q, r), 1e-12);
    EXPECT_GT(apolar_inner(p, p), 0.0);
    // The apolar norm is the Frobenius norm of the tensor.
    EXPECT_NEAR(std::sqrt(apolar_inner(p, p)), poly_to_tensor(p).norm(), 1e-12);
  }
}
