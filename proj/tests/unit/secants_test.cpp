#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "amuse/dataset.hpp"
#include "amuse/errors.hpp"
#include "amuse/secants.hpp"
#include "test_support.hpp"

namespace {

using namespace amuse;
using amuse::testing::gaussian_matrix;
using amuse::testing::random_secants;
using amuse::testing::random_symmetric;
using amuse::testing::secants_from_columns;

DataSet two_points() {
  Eigen::MatrixXd pts(2, 2);
  pts << 1, 0, 0, 1;
  return DataSet(pts, "pair");
}

TEST(BuildSecants, SinglePairIsNormalizedDifference) {
  const SecantSet s = build_secants(two_points());
  ASSERT_EQ(s.size(), 1);
  const Eigen::Vector2d expected(1 / std::sqrt(2.0), -1 / std::sqrt(2.0));
  EXPECT_NEAR((s.directions().col(0) - expected).norm(), 0.0, 1e-15);
  EXPECT_EQ(s.pairs().front(), (SecantPair{0, 1}));
}

TEST(BuildSecants, AllPairsOfSquares) {
  const SecantSet s = build_secants(generate_translated_squares(16, 4));
  EXPECT_EQ(s.size(), 169 * 168 / 2);
  const Eigen::VectorXd norms = s.directions().colwise().norm();
  EXPECT_LE((norms.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(BuildSecants, SubsampleIsSeededAndOrdered) {
  const DataSet d = generate_translated_squares(16, 4);
  const SecantSet a = build_secants(d, {2000, 1e-12, 7});
  const SecantSet b = build_secants(d, {2000, 1e-12, 7});
  const SecantSet c = build_secants(d, {2000, 1e-12, 8});
  ASSERT_EQ(a.size(), 2000);
  EXPECT_EQ(a.directions(), b.directions());
  EXPECT_EQ(a.pairs(), b.pairs());
  EXPECT_NE(a.pairs(), c.pairs());
  for (std::size_t l = 1; l < a.pairs().size(); ++l) {
    const auto& p = a.pairs()[l - 1];
    const auto& q = a.pairs()[l];
    EXPECT_TRUE(p.first < q.first || (p.first == q.first && p.second < q.second));
    EXPECT_LT(q.first, q.second);
  }
}

TEST(BuildSecants, SkipsDuplicatesAndRejectsAllDegenerate) {
  Eigen::MatrixXd pts(2, 3);
  pts << 1, 1, 0, 0, 0, 1;
  EXPECT_EQ(build_secants(DataSet(pts, "dup")).size(), 2);
  Eigen::MatrixXd same = Eigen::MatrixXd::Ones(2, 3);
  EXPECT_THROW(build_secants(DataSet(same, "same")), EmptySecantSet);
}

TEST(SecantSetType, RejectsNonUnitColumns) {
  EXPECT_THROW(secants_from_columns(Eigen::MatrixXd::Ones(2, 1)), InvalidArgument);
  EXPECT_THROW(secants_from_columns(Eigen::MatrixXd(2, 0)), EmptySecantSet);
}

TEST(ApplyOperator, IdentityGivesAllOnes) {
  const SecantSet s = build_secants(generate_translated_squares(16, 4), {2000, 1e-12, 7});
  const OperatorImage a = apply_operator(s, Eigen::MatrixXd::Identity(256, 256));
  EXPECT_LE((a.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(ApplyOperator, DiagonalExample) {
  const SecantSet s = build_secants(two_points());
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
  b(0, 0) = 1.0;
  EXPECT_NEAR(apply_operator(s, b)(0), 0.5, 1e-15);
}

TEST(ApplyOperator, FactorFormOnOrthogonalSecants) {
  const SecantSet s = secants_from_columns(Eigen::MatrixXd::Identity(3, 2));
  const OperatorImage a = apply_operator(s, s.directions().col(0), Eigen::VectorXd::Ones(1));
  EXPECT_EQ(a, Eigen::Vector2d(1.0, 0.0));
}

TEST(ApplyOperator, DimensionMismatchThrows) {
  const SecantSet s = random_secants(4, 3, 1);
  EXPECT_THROW(apply_operator(s, Eigen::MatrixXd::Identity(5, 5)), DimensionMismatch);
  EXPECT_THROW(apply_operator(s, Eigen::MatrixXd::Ones(5, 1), Eigen::VectorXd::Ones(1)),
               DimensionMismatch);
  EXPECT_THROW(apply_operator(s, Eigen::MatrixXd::Ones(4, 2), Eigen::VectorXd::Ones(1)),
               DimensionMismatch);
}

TEST(ApplyOperator, LinearAndFactorFormAgree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const SecantSet s = random_secants(12, 30, 100 + trial);
    const Eigen::MatrixXd b1 = random_symmetric(12, rng);
    const Eigen::MatrixXd b2 = random_symmetric(12, rng);
    const double alpha = 0.7, beta = -1.3;
    const OperatorImage lhs = apply_operator(s, alpha * b1 + beta * b2);
    const OperatorImage rhs = alpha * apply_operator(s, b1) + beta * apply_operator(s, b2);
    EXPECT_LE((lhs - rhs).lpNorm<Eigen::Infinity>(), 1e-12 * (1 + rhs.lpNorm<Eigen::Infinity>()));

    const Eigen::MatrixXd u = gaussian_matrix(12, 5, rng);
    const Eigen::VectorXd c = gaussian_matrix(5, 1, rng);
    const Eigen::MatrixXd dense = u * c.asDiagonal() * u.transpose();
    const OperatorImage factored = apply_operator(s, u, c);
    const OperatorImage direct = apply_operator(s, dense);
    EXPECT_LE((factored - direct).lpNorm<Eigen::Infinity>(),
              1e-10 * (1 + direct.lpNorm<Eigen::Infinity>()));
  }
}

// <A(B), w> against <B, A*(w)>, both sides evaluated with plain loops.
TEST(Adjoint, InnerProductIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 31, m = 1 + (trial * 7) % 64;
    const SecantSet s = random_secants(n, m, 500 + trial);
    const Eigen::MatrixXd b = random_symmetric(n, rng);
    const Eigen::VectorXd w = gaussian_matrix(m, 1, rng);
    const Eigen::MatrixXd& v = s.directions();

    double lhs = 0.0;
    for (Eigen::Index l = 0; l < m; ++l) {
      double q = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) q += v(i, l) * b(i, k) * v(k, l);
      lhs += q * w(l);
    }
    const Eigen::MatrixXd adj = apply_adjoint(s, w).dense();
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) rhs += b(i, k) * adj(i, k);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1 + std::abs(lhs)));
  }
}

TEST(Adjoint, MatrixFreeMatchesDense) {
  std::mt19937_64 rng(5);
  const SecantSet s = random_secants(9, 20, 5);
  const Eigen::VectorXd w = gaussian_matrix(20, 1, rng);
  const SymmetricOperator op = apply_adjoint(s, w);
  const Eigen::MatrixXd dense = s.directions() * w.asDiagonal() * s.directions().transpose();
  EXPECT_LE((op.dense() - dense).norm(), 1e-12);
  EXPECT_TRUE(op.dense().isApprox(op.dense().transpose(), 0.0));
  const Eigen::VectorXd x = gaussian_matrix(9, 1, rng);
  EXPECT_LE((op(x) - dense * x).norm(), 1e-12);
}

TEST(Adjoint, Examples) {
  const SecantSet s = random_secants(5, 3, 2);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, -1, 1);
  EXPECT_EQ(apply_adjoint(s, Eigen::VectorXd::Zero(3))(x).norm(), 0.0);

  const SecantSet one = random_secants(5, 1, 4);
  const Eigen::VectorXd v = one.directions().col(0);
  EXPECT_LE((apply_adjoint(one, Eigen::VectorXd::Ones(1))(v) - v).norm(), 1e-15);
  EXPECT_THROW(apply_adjoint(s, Eigen::VectorXd::Ones(4)), DimensionMismatch);
}

TEST(PlusAdjoint, Examples) {
  const SecantSet s = random_secants(6, 4, 9);
  const Eigen::VectorXd v1 = s.directions().col(0);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, 0.5, 2);

  Eigen::VectorXd halves(8);
  halves << 0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4;
  EXPECT_LE(plus_adjoint(s, halves)(x).norm(), 1e-15);

  Eigen::VectorXd neg = Eigen::VectorXd::Zero(8);
  neg(4) = 1.0;
  EXPECT_LE((plus_adjoint(s, neg)(x) + v1 * v1.dot(x)).norm(), 1e-14);

  Eigen::VectorXd pos = Eigen::VectorXd::Zero(8);
  pos(0) = 1.0;
  EXPECT_LE((plus_adjoint(s, pos)(x) - v1 * v1.dot(x)).norm(), 1e-14);

  EXPECT_THROW(plus_adjoint(s, Eigen::VectorXd::Ones(7)), DimensionMismatch);
}

TEST(SymmetricOperatorType, DenseCapIsEnforced) {
  const SymmetricOperator op = SymmetricOperator::from_dense(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(op.dense(3), InvalidArgument);
  EXPECT_EQ(op.dense(4), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(op(Eigen::VectorXd::Ones(3)), DimensionMismatch);
}

}  // namespace
