#include "amuse/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "amuse/eigensolver.hpp"
#include "amuse/errors.hpp"
#include "random.hpp"

namespace amuse {

namespace {

RicReport summarize(const OperatorImage& image) {
  const Eigen::ArrayXd residual = image.array() - 1.0;
  RicReport report;
  report.residual_max = residual.maxCoeff();
  report.residual_min = residual.minCoeff();
  report.residual_mean = residual.mean();
  report.delta_hat = std::max(std::abs(report.residual_max), std::abs(report.residual_min));
  return report;
}

}  // namespace

RicReport empirical_ric(const SecantSet& secants, const LearnedEmbedding& embedding) {
  RicReport report = summarize(embedding.image(secants));
  report.rank_used = embedding.rank_used();
  report.trace = embedding.trace();
  return report;
}

RicReport empirical_ric(const SecantSet& secants, const Eigen::MatrixXd& B) {
  RicReport report = summarize(apply_operator(secants, B));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B, Eigen::EigenvaluesOnly);
  const double cutoff = 1e-10 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  report.rank_used = (eig.eigenvalues().array().abs() > cutoff).count();
  report.trace = B.trace();
  return report;
}

PcaBaseline pca_baseline(const DataSet& data, Eigen::Index rank, const TraceMode& mode,
                         const SecantSet& secants) {
  if (rank < 1 || rank > data.dim()) {
    throw InvalidArgument("PCA rank must lie in [1, n]");
  }
  const auto& X = data.points();
  const Eigen::MatrixXd centered = X.colwise() - X.rowwise().mean();
  const Eigen::MatrixXd covariance =
      centered * centered.transpose() / static_cast<double>(X.cols() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
  if (eig.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");

  // Eigen sorts ascending.
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(values.maxCoeff(), 0.0);
  std::vector<RankOneFactor> factors;
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index col = values.size() - 1 - k;
    if (!(values[col] > cutoff)) break;
    Eigen::VectorXd u = eig.eigenvectors().col(col);
    canonicalize_sign(u);
    factors.push_back({std::move(u), static_cast<int>(k + 1)});
  }
  if (factors.empty()) throw DegenerateEmbedding("data covariance is zero");

  PcaBaseline out;
  out.components = static_cast<Eigen::Index>(factors.size());
  out.rank_deficient = out.components < rank;
  out.embedding = rescale(LearnedEmbedding(data.dim(), std::move(factors), 1.0, "pca"), secants,
                          mode);
  return out;
}

LearnedEmbedding gaussian_baseline(Eigen::Index dim, Eigen::Index rank, const TraceMode& mode,
                                   std::uint64_t seed, const SecantSet& secants) {
  if (dim < 1 || rank < 1) throw InvalidArgument("gaussian baseline needs n, r >= 1");
  detail::Gaussian gauss(seed);
  std::vector<RankOneFactor> rows;
  rows.reserve(static_cast<std::size_t>(rank));
  for (Eigen::Index t = 0; t < rank; ++t) {
    Eigen::VectorXd row(dim);
    for (Eigen::Index i = 0; i < dim; ++i) row[i] = gauss();
    rows.push_back({std::move(row), static_cast<int>(t + 1)});
  }
  return rescale(LearnedEmbedding(dim, std::move(rows), 1.0, "gaussian"), secants, mode);
}

double generalization_bound(double delta, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in [0, 1)");
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be nonnegative");
  return (delta + epsilon) / (1.0 - epsilon);
}

GeneralizationReport empirical_generalization(const DataSet& data,
                                              const LearnedEmbedding& embedding,
                                              const SecantSet& secants, double epsilon,
                                              int trials, std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in [0, 1)");
  if (trials < 1) throw InvalidArgument("trials must be positive");
  if (embedding.dim() != data.dim()) throw DimensionMismatch("embedding and data dimensions differ");

  GeneralizationReport report;
  report.delta_hat = empirical_ric(secants, embedding).delta_hat;
  report.epsilon = epsilon;
  report.trials = trials;
  report.bound = generalization_bound(report.delta_hat, epsilon);
  report.upper_sq_bound = (1.0 + report.bound) * (1.0 + report.bound) - 1.0;
  report.lower_sq_bound = 1.0 - (1.0 - report.bound) * (1.0 - report.bound);

  const Eigen::MatrixXd phi = embedding.phi();
  const Eigen::Index n = data.dim();
  bool passed = true;
  for (int trial = 0; trial < trials; ++trial) {
    detail::Gaussian gauss(detail::derive_seed(seed, static_cast<std::uint64_t>(trial)));
    const auto anchor_index = static_cast<Eigen::Index>(
        detail::uniform_index(gauss.engine(), static_cast<std::size_t>(data.size())));
    const Eigen::VectorXd anchor = data.point(anchor_index);
    const double anchor_norm = anchor.norm();
    if (anchor_norm == 0.0) continue;  // no unit anchor exists
    const Eigen::VectorXd x = anchor / anchor_norm;

    Eigen::VectorXd z;
    do {
      Eigen::VectorXd direction(n);
      for (Eigen::Index i = 0; i < n; ++i) direction[i] = gauss();
      direction.normalize();
      z = x + epsilon * gauss.uniform() * direction;
      z.normalize();
    } while ((z - x).norm() > epsilon);

    const double gain = (phi * z).norm();
    const double sq = gain * gain - 1.0;
    report.max_linear_distortion = std::max(report.max_linear_distortion, std::abs(gain - 1.0));
    report.max_sq_distortion = std::max(report.max_sq_distortion, std::abs(sq));
    report.max_sq_excess = std::max(report.max_sq_excess, sq);
    report.max_sq_deficit = std::max(report.max_sq_deficit, -sq);
    if (sq > report.upper_sq_bound + 1e-9 || -sq > report.lower_sq_bound + 1e-9) passed = false;
  }
  report.passed = passed;
  return report;
}

}  // namespace amuse
