#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "amuse/dataset.hpp"
#include "amuse/errors.hpp"
#include "amuse/evaluation.hpp"
#include "test_support.hpp"

namespace {

using namespace amuse;
using amuse::testing::gaussian_matrix;
using amuse::testing::random_secants;
using amuse::testing::random_symmetric;

double brute_force_ric(const SecantSet& s, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index l = 0; l < s.size(); ++l) {
    double q = 0.0;
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index k = 0; k < b.cols(); ++k)
        q += s.directions()(i, l) * b(i, k) * s.directions()(k, l);
    worst = std::max(worst, std::abs(q - 1.0));
  }
  return worst;
}

TEST(EmpiricalRic, Examples) {
  const SecantSet s = random_secants(7, 20, 1);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(7, 7);
  EXPECT_NEAR(empirical_ric(s, id).delta_hat, 0.0, 1e-14);
  EXPECT_EQ(empirical_ric(s, id).rank_used, 7);
  EXPECT_NEAR(empirical_ric(s, Eigen::MatrixXd::Zero(7, 7)).delta_hat, 1.0, 1e-15);
  EXPECT_NEAR(empirical_ric(s, Eigen::MatrixXd(2.0 * id)).delta_hat, 1.0, 1e-14);
  EXPECT_THROW(empirical_ric(s, Eigen::MatrixXd::Identity(6, 6)), DimensionMismatch);
}

TEST(EmpiricalRic, MatchesBruteForceLoop) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const SecantSet s = random_secants(6, 25, 10 + trial);
    std::vector<RankOneFactor> factors;
    for (int t = 0; t < 4; ++t)
      factors.push_back(t == 2 ? RankOneFactor::zero(t)
                               : RankOneFactor{gaussian_matrix(6, 1, rng).normalized(), t});
    const LearnedEmbedding e(6, factors, 3.0);
    const RicReport report = empirical_ric(s, e);
    EXPECT_NEAR(report.delta_hat, brute_force_ric(s, e.gram()), 1e-12);
    EXPECT_DOUBLE_EQ(report.delta_hat,
                     std::max(std::abs(report.residual_max), std::abs(report.residual_min)));
    EXPECT_EQ(report.rank_used, 3);
    EXPECT_NEAR(report.trace, e.trace(), 1e-14);
  }
}

TEST(EmpiricalRic, ScaleCovariant) {
  std::mt19937_64 rng(3);
  const SecantSet s = random_secants(5, 12, 3);
  const Eigen::MatrixXd b = random_symmetric(5, rng);
  const OperatorImage a = apply_operator(s, b);
  for (double c : {0.25, 1.0, 3.0}) {
    const RicReport r = empirical_ric(s, Eigen::MatrixXd(c * b));
    EXPECT_NEAR(r.residual_max, (c * a.array() - 1.0).maxCoeff(), 1e-13);
    EXPECT_NEAR(r.residual_min, (c * a.array() - 1.0).minCoeff(), 1e-13);
  }
}

TEST(PcaBaseline, SingleDirectionData) {
  Eigen::VectorXd u(4);
  u << 1, 2, -1, 0.5;
  u.normalize();
  Eigen::MatrixXd pts(4, 5);
  for (int j = 0; j < 5; ++j) pts.col(j) = (j - 2.0) * u;
  const DataSet d(pts, "line");
  const SecantSet s = build_secants(d);
  const PcaBaseline pca = pca_baseline(d, 1, TraceMode::automatic(), s);
  ASSERT_EQ(pca.embedding.rank_used(), 1);
  EXPECT_NEAR(std::abs(pca.embedding.directions().col(0).dot(u)), 1.0, 1e-12);
  EXPECT_FALSE(pca.rank_deficient);

  const PcaBaseline wide = pca_baseline(d, 3, TraceMode::automatic(), s);
  EXPECT_TRUE(wide.rank_deficient);
  EXPECT_EQ(wide.components, 1);
}

TEST(PcaBaseline, FullRankBeatsSingleDirection) {
  std::mt19937_64 rng(8);
  const DataSet d(gaussian_matrix(6, 40, rng), "cloud");
  const SecantSet s = build_secants(d, {300, 1e-12, 1});
  const double full = empirical_ric(s, pca_baseline(d, 6, TraceMode::automatic(), s).embedding).delta_hat;
  const double one = empirical_ric(s, pca_baseline(d, 1, TraceMode::automatic(), s).embedding).delta_hat;
  EXPECT_LE(full, one);
}

TEST(PcaBaseline, IsotropicDataGivesIdentity) {
  // +-e_i point cloud: centred covariance is a multiple of the identity
  Eigen::MatrixXd pts(3, 6);
  pts << 1, -1, 0, 0, 0, 0,
         0, 0, 1, -1, 0, 0,
         0, 0, 0, 0, 1, -1;
  const DataSet d(pts, "iso");
  const SecantSet s = build_secants(d);
  const PcaBaseline pca = pca_baseline(d, 3, TraceMode::automatic(), s);
  EXPECT_NEAR(empirical_ric(s, pca.embedding).delta_hat, 0.0, 1e-12);
  const Eigen::MatrixXd dirs = pca.embedding.directions();
  EXPECT_LE((dirs.transpose() * dirs - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-9);
}

TEST(PcaBaseline, DirectionsOrthonormalAndFixedTrace) {
  const DataSet d = generate_translated_squares(8, 3);
  const SecantSet s = build_secants(d, {500, 1e-12, 2});
  const PcaBaseline pca = pca_baseline(d, 10, TraceMode::fixed(4.0), s);
  const Eigen::MatrixXd dirs = pca.embedding.directions();
  EXPECT_LE((dirs.transpose() * dirs - Eigen::MatrixXd::Identity(10, 10)).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_NEAR(pca.embedding.trace(), 4.0, 1e-9);
  EXPECT_THROW(pca_baseline(d, 0, TraceMode::automatic(), s), InvalidArgument);
}

TEST(GaussianBaseline, SeededAndScaled) {
  const SecantSet s = random_secants(12, 30, 4);
  const LearnedEmbedding a = gaussian_baseline(12, 5, TraceMode::fixed(2.5), 9, s);
  const LearnedEmbedding b = gaussian_baseline(12, 5, TraceMode::fixed(2.5), 9, s);
  const LearnedEmbedding c = gaussian_baseline(12, 5, TraceMode::fixed(2.5), 10, s);
  EXPECT_EQ(a.phi(), b.phi());
  EXPECT_NE(a.phi(), c.phi());
  EXPECT_NEAR((a.phi().transpose() * a.phi()).trace(), 2.5, 1e-9);
  EXPECT_EQ(a.phi().rows(), 5);
}

TEST(GeneralizationBound, Examples) {
  EXPECT_NEAR(generalization_bound(0.1, 0.05), 3.0 / 19.0, 1e-15);
  EXPECT_DOUBLE_EQ(generalization_bound(0.3, 0.0), 0.3);
  EXPECT_NEAR(generalization_bound(0.0, 0.2), 0.25, 1e-15);
  EXPECT_THROW(generalization_bound(0.1, 1.0), InvalidArgument);
  EXPECT_THROW(generalization_bound(-0.1, 0.5), InvalidArgument);
}

TEST(GeneralizationBound, MonotoneInBothArguments) {
  for (double d = 0.0; d < 2.0; d += 0.05) {
    for (double e = 0.0; e < 0.95; e += 0.05) {
      EXPECT_LT(generalization_bound(d, e), generalization_bound(d + 0.05, e));
      EXPECT_LT(generalization_bound(d, e), generalization_bound(d, e + 0.05));
    }
  }
}

TEST(EmpiricalGeneralization, IdentityHasNoDistortion) {
  const DataSet d = generate_translated_squares(4, 2);
  const SecantSet s = build_secants(d);
  std::vector<RankOneFactor> factors;
  for (int i = 0; i < 16; ++i) factors.push_back({Eigen::VectorXd::Unit(16, i), i});
  const LearnedEmbedding identity(16, factors, 16.0);
  const GeneralizationReport r = empirical_generalization(d, identity, s, 0.3, 200, 5);
  EXPECT_NEAR(r.max_linear_distortion, 0.0, 1e-12);
  EXPECT_NEAR(r.delta_hat, 0.0, 1e-12);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.trials, 200);
}

TEST(EmpiricalGeneralization, ReportIsConsistentAndSeeded) {
  const DataSet d = generate_translated_squares(6, 2);
  const SecantSet s = build_secants(d, {200, 1e-12, 3});
  const LearnedEmbedding e = gaussian_baseline(36, 20, TraceMode::automatic(), 2, s);
  const GeneralizationReport a = empirical_generalization(d, e, s, 0.05, 100, 11);
  const GeneralizationReport b = empirical_generalization(d, e, s, 0.05, 100, 11);
  EXPECT_EQ(a.max_sq_distortion, b.max_sq_distortion);
  EXPECT_NEAR(a.bound, generalization_bound(a.delta_hat, 0.05), 1e-15);
  EXPECT_NEAR(a.upper_sq_bound, std::pow(1 + a.bound, 2) - 1, 1e-15);
  EXPECT_NEAR(a.lower_sq_bound, 1 - std::pow(1 - a.bound, 2), 1e-15);
  EXPECT_DOUBLE_EQ(a.max_sq_distortion, std::max(a.max_sq_excess, a.max_sq_deficit));
  EXPECT_EQ(a.passed, a.max_sq_excess <= a.upper_sq_bound + 1e-9 &&
                          a.max_sq_deficit <= a.lower_sq_bound + 1e-9);
  EXPECT_THROW(empirical_generalization(d, e, s, 1.0, 10, 1), InvalidArgument);
  EXPECT_THROW(empirical_generalization(d, e, s, 0.1, 0, 1), InvalidArgument);
}

}  // namespace
