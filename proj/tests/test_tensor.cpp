#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "test_util.hpp"
#include "tbss/multi_index.hpp"
#include "tbss/rankref.hpp"
#include "tbss/tensor.hpp"

using namespace tbss;
using tbss::testing::random_dense;
using tbss::testing::random_sym;
using tbss::testing::rel_err;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

// The 2x2x2 tensor with ones at (0,1,1), (1,0,1), (1,1,0).
DenseTensor three_ones() {
  DenseTensor t({2, 2, 2});
  t({0, 1, 1}) = t({1, 0, 1}) = t({1, 1, 0}) = 1.0;
  return t;
}

}  // namespace

// ---- multi-indices ----------------------------------------------------------

TEST(MultiIndex, IndexMapCountsOccurrences) {
  const std::vector<int> i{0, 0, 3};  // [1,1,4] in 1-based indexing
  EXPECT_EQ(index_map(i, 4), (MultiIndex{2, 0, 0, 1}));
  EXPECT_EQ(index_map(std::vector<int>{1}, 3), (MultiIndex{0, 1, 0}));
  EXPECT_EQ(index_map(std::vector<int>{3, 0, 0}, 4), index_map(i, 4));
  EXPECT_THROW(index_map(std::vector<int>{0, 4}, 4), std::out_of_range);
}

TEST(MultiIndex, Multiplicity) {
  EXPECT_EQ(multiplicity(std::vector<int>{3, 1}), 4u);
  EXPECT_EQ(multiplicity(std::vector<int>{2, 2}), 6u);
  EXPECT_EQ(multiplicity(std::vector<int>{5, 0, 0}), 1u);
  EXPECT_EQ(multiplicity(std::vector<int>{1, 1, 1}), 6u);
}

TEST(MultiIndex, EnumerationOrderAndRank) {
  const auto js = enumerate_multi_indices(3, 2);
  ASSERT_EQ(js.size(), sym_size(3, 2));
  EXPECT_EQ(js.front(), (MultiIndex{2, 0, 0}));
  EXPECT_EQ(js.back(), (MultiIndex{0, 0, 2}));
  EXPECT_TRUE(std::is_sorted(js.rbegin(), js.rend()));
  for (int n = 1; n <= 5; ++n)
    for (int d = 1; d <= 5; ++d) {
      const auto all = enumerate_multi_indices(n, d);
      ASSERT_EQ(all.size(), binomial(n + d - 1, d));
      std::uint64_t total = 0;
      for (std::size_t t = 0; t < all.size(); ++t) {
        ASSERT_EQ(multi_index_rank(all[t]), t);
        total += multiplicity(all[t]);
      }
      // Multiplicities count all n^d positions.
      std::uint64_t nd = 1;
      for (int k = 0; k < d; ++k) nd *= static_cast<std::uint64_t>(n);
      EXPECT_EQ(total, nd);
    }
}

TEST(MultiIndex, SortedIndicesInvertsIndexMap) {
  const MultiIndex j{1, 0, 2};
  EXPECT_EQ(sorted_indices(j), (std::vector<int>{0, 2, 2}));
  EXPECT_EQ(index_map(sorted_indices(j), 3), j);
}

// ---- dense tensors ----------------------------------------------------------

TEST(DenseTensor, ShapeValidation) {
  EXPECT_EQ(DenseTensor().order(), 0);
  EXPECT_EQ(DenseTensor().size(), 1u);
  EXPECT_THROW(DenseTensor({2, 2}, std::vector<double>(3)), std::invalid_argument);
  DenseTensor t({2, 3, 4});
  EXPECT_EQ(t.strides(), (std::vector<std::size_t>{12, 4, 1}));
  t({1, 2, 3}) = 5.0;
  EXPECT_EQ(t.data()[23], 5.0);
}

TEST(OuterProduct, UnitVectors) {
  const auto m = outer_product(DenseTensor::from_vector(vec({1, 0})), DenseTensor::from_vector(vec({0, 1})));
  EXPECT_EQ(m.to_matrix(), (Eigen::Matrix2d() << 0, 1, 0, 0).finished());
}

TEST(OuterProduct, TwoVectors) {
  const auto m = outer_product(DenseTensor::from_vector(vec({1, 2})), DenseTensor::from_vector(vec({3, 4})));
  EXPECT_EQ(m.to_matrix(), (Eigen::Matrix2d() << 3, 4, 6, 8).finished());
}

TEST(OuterProduct, ScalarOneIsNeutral) {
  Rng rng(1);
  const auto t = random_dense(rng, {2, 3, 2});
  EXPECT_EQ(outer_product(DenseTensor::scalar(1.0), t), t);
}

TEST(Contract, IdentityWithVector) {
  const Eigen::VectorXd v = vec({1.5, -2, 3});
  const auto r = contract(DenseTensor::from_matrix(Eigen::Matrix3d::Identity()), DenseTensor::from_vector(v), 0, 0);
  EXPECT_EQ(r.to_vector(), v);
}

TEST(Contract, MatricesOnFirstModesGiveAtB) {
  Rng rng(2);
  const Eigen::MatrixXd a = rng.normal_matrix(2, 3), b = rng.normal_matrix(2, 4);
  const auto r = contract(DenseTensor::from_matrix(a), DenseTensor::from_matrix(b), 0, 0);
  EXPECT_LE((r.to_matrix() - a.transpose() * b).norm(), 1e-14);
}

TEST(Contract, ThreeTimesWithUnitVectorPicksEntry) {
  Rng rng(3);
  const auto t = random_dense(rng, {3, 3, 3});
  const auto e = DenseTensor::from_vector(vec({1, 0, 0}));
  const auto r = contract(contract(contract(t, e, 0, 0), e, 0, 0), e, 0, 0);
  EXPECT_EQ(r.order(), 0);
  EXPECT_DOUBLE_EQ(r.data()[0], t({0, 0, 0}));
}

TEST(Contract, GeneralModesMatchIndexOracle) {
  Rng rng(4);
  const auto a = random_dense(rng, {2, 3, 4});
  const auto b = random_dense(rng, {5, 3});
  const auto r = contract(a, b, 1, 1);
  ASSERT_EQ(r.dims(), (std::vector<std::size_t>{2, 4, 5}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t l = 0; l < 5; ++l) {
        double s = 0;
        for (std::size_t j = 0; j < 3; ++j) s += a({i, j, k}) * b({l, j});
        EXPECT_NEAR(r({i, k, l}), s, 1e-13);
      }
  EXPECT_THROW(contract(a, b, 0, 1), std::invalid_argument);
}

TEST(Tucker, IdentityIsExact) {
  Rng rng(5);
  const auto t = random_dense(rng, {2, 3, 4});
  EXPECT_EQ(tucker_transform(t, {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3),
                                 Eigen::MatrixXd::Identity(4, 4)}),
            t);
}

TEST(Tucker, OrderTwoIsCongruence) {
  Rng rng(6);
  const Eigen::MatrixXd t = rng.normal_matrix(3, 4), a = rng.normal_matrix(2, 3), b = rng.normal_matrix(5, 4);
  const auto r = tucker_transform(DenseTensor::from_matrix(t), {a, b});
  EXPECT_LE((r.to_matrix() - a * t * b.transpose()).norm(), 1e-13);
}

TEST(Tucker, DiagonalOrderFourMatchesSumOverSources) {
  Rng rng(7);
  const int n = 3, p = 2;
  const Eigen::MatrixXd a = rng.normal_matrix(n, p);
  const Eigen::VectorXd kappa = rng.normal_vector(p);
  DenseTensor diag({2, 2, 2, 2});
  for (std::size_t i = 0; i < 2; ++i) diag({i, i, i, i}) = kappa(static_cast<Eigen::Index>(i));
  const auto r = tucker_transform(diag, {a, a, a, a});
  const auto expect = tbss::testing::mixed_diagonal(a, kappa, 4).expand();
  EXPECT_LE(rel_err(r, expect), 1e-13);
}

TEST(Tucker, MatchesSummationOracleAndShapeChecks) {
  Rng rng(8);
  const auto t = random_dense(rng, {2, 3, 2});
  const std::vector<Eigen::MatrixXd> m{rng.normal_matrix(3, 2), rng.normal_matrix(2, 3), rng.normal_matrix(4, 2)};
  EXPECT_LE(rel_err(tucker_transform(t, m), tbss::testing::tucker_oracle(t, m)), 1e-13);
  EXPECT_THROW(tucker_transform(t, {m[1], m[1], m[2]}), std::invalid_argument);
}

TEST(Tucker, ComposesAsMatrixProducts) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_dense(rng, {3, 2, 4});
    const std::vector<Eigen::MatrixXd> m{rng.normal_matrix(3, 3), rng.normal_matrix(4, 2), rng.normal_matrix(2, 4)};
    const std::vector<Eigen::MatrixXd> nn{rng.normal_matrix(2, 3), rng.normal_matrix(3, 4), rng.normal_matrix(5, 2)};
    const auto twice = tucker_transform(tucker_transform(t, m), nn);
    const auto once = tucker_transform(t, {nn[0] * m[0], nn[1] * m[1], nn[2] * m[2]});
    EXPECT_LE(rel_err(twice, once), 1e-12);
  }
}

TEST(Unfold, MatrixModes) {
  Rng rng(10);
  const Eigen::MatrixXd m = rng.normal_matrix(3, 4);
  const auto t = DenseTensor::from_matrix(m);
  EXPECT_EQ(mode_n_unfold(t, 0), m);
  EXPECT_EQ(mode_n_unfold(t, 1), m.transpose());
  EXPECT_THROW(mode_n_unfold(t, 2), std::invalid_argument);
}

TEST(Unfold, ColumnOrderIsLexicographicOverRemainingModes) {
  Rng rng(11);
  const auto t = random_dense(rng, {2, 3, 4});
  const auto u0 = mode_n_unfold(t, 0), u1 = mode_n_unfold(t, 1), u2 = mode_n_unfold(t, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k) {
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
        EXPECT_EQ(u0(ii, jj * 4 + kk), t({i, j, k}));
        EXPECT_EQ(u1(jj, ii * 4 + kk), t({i, j, k}));
        EXPECT_EQ(u2(kk, ii * 3 + jj), t({i, j, k}));
      }
}

TEST(Unfold, RankOneGivesRankOneMatrix) {
  Rng rng(12);
  const auto t = outer_product(outer_product(DenseTensor::from_vector(rng.normal_vector(3)),
                                             DenseTensor::from_vector(rng.normal_vector(4))),
                               DenseTensor::from_vector(rng.normal_vector(2)));
  for (int mode = 0; mode < 3; ++mode) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mode_n_unfold(t, mode));
    EXPECT_LE(svd.singularValues()(1), 1e-10 * svd.singularValues()(0));
    EXPECT_EQ(mode_n_rank(t, mode), 1);
  }
}

TEST(Unfold, ThreeOnesPattern) {
  const auto u = mode_n_unfold(three_ones(), 0);
  EXPECT_EQ(u.row(0), (Eigen::RowVector4d() << 0, 0, 0, 1).finished());
  EXPECT_EQ(u.row(1), (Eigen::RowVector4d() << 0, 1, 1, 0).finished());
  for (int mode = 0; mode < 3; ++mode) EXPECT_EQ(mode_n_rank(three_ones(), mode), 2);
}

// Ones at (0,0,1), (0,1,0), (1,0,0): the same pattern with x and y swapped.
TEST(Unfold, SwappedThreeOnesPattern) {
  DenseTensor t({2, 2, 2});
  t({0, 0, 1}) = t({0, 1, 0}) = t({1, 0, 0}) = 1.0;
  const auto u = mode_n_unfold(t, 0);
  EXPECT_EQ(u.row(0), (Eigen::RowVector4d() << 0, 1, 1, 0).finished());
  EXPECT_EQ(u.row(1), (Eigen::RowVector4d() << 1, 0, 0, 0).finished());
  for (int mode = 0; mode < 3; ++mode) EXPECT_EQ(mode_n_rank(t, mode), 2);
}

TEST(Unfold, ZeroTensorHasRankZero) { EXPECT_EQ(mode_n_rank(DenseTensor({2, 3, 2}), 1), 0); }

TEST(Unfold, ModeRankWithinHowellBound) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<std::size_t> dims{2 + static_cast<std::size_t>(trial % 3), 3, 2 + static_cast<std::size_t>(trial % 4)};
    const auto t = random_dense(rng, dims);
    for (int mode = 0; mode < 3; ++mode) {
      EXPECT_LE(static_cast<std::uint64_t>(mode_n_rank(t, mode)), howell_bound(dims));
      EXPECT_LE(static_cast<std::size_t>(mode_n_rank(t, mode)), dims[static_cast<std::size_t>(mode)]);
    }
  }
}

TEST(Frobenius, InnerProducts) {
  Rng rng(14);
  const auto t = random_dense(rng, {2, 2, 3});
  EXPECT_NEAR(frobenius_inner(t, t), t.norm() * t.norm(), 1e-13);
  EXPECT_EQ(frobenius_inner(DenseTensor({2, 2}), DenseTensor({2, 2})), 0.0);
  const auto e1 = DenseTensor::from_vector(vec({1, 0})), e2 = DenseTensor::from_vector(vec({0, 1}));
  EXPECT_EQ(frobenius_inner(outer_product(e1, e1), outer_product(e2, e2)), 0.0);
  const Eigen::VectorXd u = rng.normal_vector(3), v = rng.normal_vector(2), w = rng.normal_vector(3), z = rng.normal_vector(2);
  const double lhs = frobenius_inner(outer_product(DenseTensor::from_vector(u), DenseTensor::from_vector(v)),
                                     outer_product(DenseTensor::from_vector(w), DenseTensor::from_vector(z)));
  EXPECT_NEAR(lhs, u.dot(w) * v.dot(z), 1e-13);
  EXPECT_THROW(frobenius_inner(t, DenseTensor({2, 3, 2})), std::invalid_argument);
}

TEST(Kronecker, SmallCases) {
  EXPECT_EQ(kronecker(vec({1, 0}), vec({0, 1})), vec({0, 1, 0, 0}));
  EXPECT_EQ(kronecker(vec({1, 2}), vec({3, 4})), vec({3, 4, 6, 8}));
  Rng rng(15);
  const Eigen::VectorXd u = rng.normal_vector(4), v = rng.normal_vector(3);
  EXPECT_NEAR(kronecker(u, v).norm(), u.norm() * v.norm(), 1e-13);
}

TEST(SymKronecker, LengthsAndNormIdentity) {
  EXPECT_EQ(sym_kronecker(vec({1, 1}), 2).size(), 3);
  Rng rng(16);
  EXPECT_EQ(sym_kronecker(rng.normal_vector(3), 3).size(), 10);
  for (int d = 1; d <= 4; ++d)
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd w = rng.normal_vector(1 + trial % 4);
      Eigen::VectorXd full = w;
      for (int k = 1; k < d; ++k) full = kronecker(full, w);
      EXPECT_NEAR(sym_kronecker(w, d).norm(), full.norm(), 1e-12 * full.norm());
    }
}

TEST(Vecs, RoundTrips) {
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  EXPECT_EQ(unvecs(vecs(id)), Eigen::MatrixXd(id));
  Rng rng(17);
  const Eigen::VectorXd f = rng.normal_vector(3);
  EXPECT_LE((unvecs(sym_kronecker(f, 2)) - f * f.transpose()).norm(), 1e-14);
  const Eigen::VectorXd x = rng.normal_vector(6);
  EXPECT_LE((vecs(unvecs(x)) - x).norm(), 1e-14);
  Eigen::Matrix2d asym;
  asym << 1, 2, 3, 4;
  EXPECT_THROW(vecs(asym), std::invalid_argument);
  EXPECT_THROW(unvecs(rng.normal_vector(4)), std::invalid_argument);
}

TEST(Symmetrize, FixesSymmetricInputs) {
  Rng rng(18);
  const auto s = random_sym(rng, 3, 3);
  EXPECT_LE(rel_err(symmetrize(s.expand()).expand(), s.expand()), 1e-15);
  const auto e1 = DenseTensor::from_vector(vec({1, 0})), e2 = DenseTensor::from_vector(vec({0, 1}));
  const auto m = outer_product(e1, e2) + outer_product(e2, e1);
  EXPECT_EQ(symmetrize(m).expand(), m);
  EXPECT_THROW(symmetrize(DenseTensor({2, 3})), std::invalid_argument);
}

TEST(Symmetrize, ExpansionInvariantUnderPermutations) {
  Rng rng(19);
  const auto s = symmetrize(random_dense(rng, {3, 3, 3})).expand();
  std::vector<std::size_t> perm{0, 1, 2};
  do {
    tbss::testing::for_each_index(s.dims(), [&](const std::vector<std::size_t>& i) {
      const std::vector<std::size_t> p{i[perm[0]], i[perm[1]], i[perm[2]]};
      EXPECT_EQ(s(i), s(p));
    });
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(SymTensor, PackedLayoutAndNorm) {
  EXPECT_THROW(SymTensor(2, 3, std::vector<double>(3)), std::invalid_argument);
  Rng rng(20);
  const auto s = random_sym(rng, 3, 4);
  EXPECT_NEAR(s.norm(), s.expand().norm(), 1e-13);
  EXPECT_EQ(s.entry({2, 0, 1, 0}), s.at_multi(std::vector<int>{2, 1, 1}));
}

TEST(Congruence, MatchesOracle) {
  Rng rng(21);
  const auto s = random_sym(rng, 3, 3);
  const Eigen::MatrixXd m = rng.normal_matrix(2, 3);
  const auto r = congruence(s, m);
  EXPECT_EQ(r.dim(), 2);
  EXPECT_LE(rel_err(r.expand(), tbss::testing::tucker_oracle(s.expand(), {m, m, m})), 1e-13);
}

TEST(ModeProduct, MatchesTuckerOnOneMode) {
  Rng rng(22);
  const auto t = random_dense(rng, {3, 4, 2});
  const Eigen::MatrixXd m = rng.normal_matrix(5, 4);
  const auto r = mode_product(t, m, 1);
  EXPECT_LE(rel_err(r, tbss::testing::tucker_oracle(t, {Eigen::MatrixXd::Identity(3, 3), m,
                                                        Eigen::MatrixXd::Identity(2, 2)})),
            1e-13);
}
