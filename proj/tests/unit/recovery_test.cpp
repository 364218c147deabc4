#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/LU>
#include <Eigen/QR>
#include <gtest/gtest.h>

#include "amuse/dataset.hpp"
#include "amuse/errors.hpp"
#include "amuse/recovery.hpp"
#include "test_support.hpp"

namespace {

using namespace amuse;
using amuse::testing::gaussian_matrix;

TEST(AddNoise, Examples) {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(16, -1, 2);
  EXPECT_LE((add_noise(x, 1e9, 3) - x).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_EQ(add_noise(x, 10.0, 3), add_noise(x, 10.0, 3));
  EXPECT_NE(add_noise(x, 10.0, 3), add_noise(x, 10.0, 4));
  EXPECT_THROW(add_noise(Eigen::VectorXd::Zero(4), 10.0, 1), InvalidArgument);
}

TEST(AddNoise, ZeroDbMatchesSignalEnergyOnAverage) {
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(64);
  double total = 0.0;
  const int draws = 4000;
  for (int k = 0; k < draws; ++k) total += (add_noise(x, 0.0, k) - x).squaredNorm();
  // sample mean of a chi-square(64) scaled to mean 64; sd of the mean ~ 0.18
  EXPECT_NEAR(total / draws, x.squaredNorm(), 1.0);
  double total20 = 0.0;
  for (int k = 0; k < draws; ++k) total20 += (add_noise(x, 20.0, k) - x).squaredNorm();
  EXPECT_NEAR(total20 / draws, x.squaredNorm() / 100.0, 0.01);
}

TEST(BpdnDecode, IdentitySoftThresholds) {
  const BpdnResult r = bpdn_decode(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1.0, -0.2),
                                   {0.5, 3000, 1e-12});
  EXPECT_NEAR(r.estimate(0), 0.5, 1e-9);
  EXPECT_NEAR(r.estimate(1), 0.0, 1e-9);
}

TEST(BpdnDecode, LeastSquaresWhenUnregularized) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd phi =
      gaussian_matrix(4, 4, rng) + 4.0 * Eigen::MatrixXd::Identity(4, 4);  // well conditioned
  const Eigen::VectorXd y = gaussian_matrix(4, 1, rng);
  const BpdnResult r = bpdn_decode(phi, y, {0.0, 20000, 1e-15});
  EXPECT_LE((r.estimate - phi.lu().solve(y)).norm(), 1e-6);
}

TEST(BpdnDecode, OrthonormalRowsGiveLeastNorm) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd q = gaussian_matrix(8, 8, rng).householderQr().householderQ();
  const Eigen::MatrixXd phi = q.topRows(3);
  const Eigen::VectorXd y = gaussian_matrix(3, 1, rng);
  const BpdnResult r = bpdn_decode(phi, y, {0.0, 5000, 1e-15});
  EXPECT_LE((r.estimate - phi.transpose() * y).norm(), 1e-7);
}

// Exhaustive oracle: least squares on every 2-sparse support.
Eigen::VectorXd best_two_sparse(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y) {
  double best = 1e300;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(phi.cols());
  for (Eigen::Index i = 0; i < phi.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < phi.cols(); ++j) {
      Eigen::MatrixXd sub(phi.rows(), 2);
      sub << phi.col(i), phi.col(j);
      const Eigen::Vector2d c = sub.colPivHouseholderQr().solve(y);
      const double res = (sub * c - y).norm();
      if (res < best) {
        best = res;
        out.setZero();
        out(i) = c(0);
        out(j) = c(1);
      }
    }
  }
  return out;
}

TEST(BpdnDecode, RecoversTwoSparseSignals) {
  std::mt19937_64 rng(4);
  int recovered = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd phi = gaussian_matrix(8, 16, rng) / std::sqrt(8.0);
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(16);
    z0(trial % 16) = 1.5;
    z0((trial * 5 + 3) % 16) = -1.0;
    const Eigen::VectorXd y = phi * z0;
    const Eigen::VectorXd oracle = best_two_sparse(phi, y);
    EXPECT_LE((oracle - z0).norm(), 1e-9 * z0.norm());

    const double lambda = 1e-6;
    const BpdnResult r = bpdn_decode(phi, y, {lambda, 200000, 1e-16});
    const double at_truth = bpdn_objective(phi, y, z0, lambda);
    // never worse than the planted signal
    EXPECT_LE(r.objective, at_truth * (1 + 1e-9)) << "trial " << trial;
    if (r.objective < at_truth * (1 - 1e-6)) {
      // a feasible point with smaller l1 norm exists, so z0 is not the l1
      // minimizer for this draw and l1 recovery is not expected
      continue;
    }
    ++recovered;
    EXPECT_LE((r.estimate - z0).norm() / z0.norm(), 1e-3) << "trial " << trial;
    EXPECT_LE((r.estimate - oracle).norm() / z0.norm(), 1e-3);
  }
  EXPECT_GE(recovered, 7);
}

TEST(BpdnDecode, ObjectiveIsMonotone) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd phi = gaussian_matrix(10, 30, rng);
  const Eigen::VectorXd y = gaussian_matrix(10, 1, rng);
  const double lambda = 0.1 * (phi.transpose() * y).lpNorm<Eigen::Infinity>();
  const BpdnResult r = bpdn_decode(phi, y, {lambda, 2000, 1e-12});
  ASSERT_GE(r.objective_trace.size(), 2u);
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
    EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1] + 1e-12);
  EXPECT_NEAR(r.objective, bpdn_objective(phi, y, r.estimate, lambda), 1e-12);
}

TEST(BpdnDecode, IterationCapFlagsInsteadOfThrowing) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd phi = gaussian_matrix(10, 30, rng);
  const Eigen::VectorXd y = gaussian_matrix(10, 1, rng);
  const BpdnResult r = bpdn_decode(phi, y, {0.01, 3, 1e-16});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_THROW(bpdn_decode(phi, Eigen::VectorXd::Ones(9), {0.1, 10, 1e-6}), DimensionMismatch);
  EXPECT_THROW(bpdn_decode(phi, y, {-0.1, 10, 1e-6}), InvalidArgument);
}

TEST(SampleSubset, SortedDistinctSeeded) {
  const auto a = sample_subset(169, 50, 3);
  EXPECT_EQ(a, sample_subset(169, 50, 3));
  EXPECT_NE(a, sample_subset(169, 50, 4));
  ASSERT_EQ(a.size(), 50u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  EXPECT_THROW(sample_subset(10, 11, 1), InvalidArgument);
}

TEST(MseSweep, IdentityChannelIsExact) {
  const DataSet d = generate_translated_squares(6, 2);
  RecoveryConfig c;
  c.snr_grid = {300.0};
  c.subset_size = 10;
  c.lambda_factor = 1e-12;
  c.tol = 1e-16;
  const RecoveryReport r = mse_sweep(d, {{"identity", Eigen::MatrixXd::Identity(36, 36)}}, c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_LE(r.rows[0].mean_mse, 1e-12);
}

TEST(MseSweep, DuplicateLabelsRejected) {
  const DataSet d = generate_translated_squares(4, 2);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(16, 16);
  RecoveryConfig c;
  c.subset_size = 3;
  EXPECT_THROW(mse_sweep(d, {{"a", id}, {"a", id}}, c), InvalidArgument);
  EXPECT_THROW(mse_sweep(d, {{"a", Eigen::MatrixXd::Identity(15, 15)}}, c), DimensionMismatch);
}

TEST(MseSweep, ReportShapeAndSharedNoise) {
  const DataSet d = generate_translated_squares(6, 2);
  std::mt19937_64 rng(7);
  RecoveryConfig c;
  c.snr_grid = {5.0, 25.0};
  c.subset_size = 8;
  c.seed = 4;
  const Eigen::MatrixXd g = gaussian_matrix(20, 36, rng) / std::sqrt(20.0);
  const RecoveryReport r = mse_sweep(d, {{"g", g}, {"g2", g}}, c);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[0].snr_db, 5.0);
  EXPECT_EQ(r.rows[0].label, "g");
  EXPECT_EQ(r.rows[1].label, "g2");
  EXPECT_EQ(r.rows[2].snr_db, 25.0);
  // identical matrices see identical corruption
  EXPECT_EQ(r.rows[0].mse, r.rows[1].mse);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.mse.size(), 8u);
    for (double m : row.mse) EXPECT_GE(m, 0.0);
  }
}

TEST(MseSweep, InvariantToSubsetOrder) {
  const DataSet d = generate_translated_squares(6, 2);
  std::mt19937_64 rng(8);
  RecoveryConfig c;
  c.snr_grid = {15.0};
  const Eigen::MatrixXd g = gaussian_matrix(20, 36, rng);
  std::vector<Eigen::Index> subset{3, 9, 14, 20, 24};
  std::vector<Eigen::Index> shuffled{20, 3, 24, 14, 9};
  const RecoveryReport a = mse_sweep(d, {{"g", g}}, c, subset);
  const RecoveryReport b = mse_sweep(d, {{"g", g}}, c, shuffled);
  EXPECT_NEAR(a.rows[0].mean_mse, b.rows[0].mean_mse, 1e-15);
}

}  // namespace
