#include "amuse/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "amuse/eigensolver.hpp"
#include "amuse/errors.hpp"
#include "random.hpp"

namespace amuse {

namespace {

constexpr double kMaxSnrDb = 300.0;
constexpr int kWindow = 10;

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
  return v.unaryExpr([tau](double a) {
    return a > tau ? a - tau : (a < -tau ? a + tau : 0.0);
  });
}

Eigen::VectorXd gaussian_vector(Eigen::Index n, std::uint64_t seed) {
  detail::Gaussian gauss(seed);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = gauss();
  return w;
}

double noise_sigma(double signal_norm, Eigen::Index n, double snr_db) {
  const double snr = std::min(snr_db, kMaxSnrDb);
  return signal_norm / std::sqrt(static_cast<double>(n) * std::pow(10.0, snr / 10.0));
}

}  // namespace

Eigen::VectorXd add_noise(const Eigen::VectorXd& signal, double snr_db, std::uint64_t seed) {
  const double norm = signal.norm();
  if (!(norm > 0.0)) throw InvalidArgument("cannot set an SNR for a zero signal");
  if (std::isnan(snr_db)) throw InvalidArgument("SNR must be a number");
  const double sigma = noise_sigma(norm, signal.size(), snr_db);
  return signal + sigma * gaussian_vector(signal.size(), seed);
}

double bpdn_objective(const Eigen::MatrixXd& phi, const Eigen::VectorXd& measurements,
                      const Eigen::VectorXd& z, double lambda) {
  return 0.5 * (measurements - phi * z).squaredNorm() + lambda * z.lpNorm<1>();
}

BpdnResult bpdn_decode(const Eigen::MatrixXd& phi, const Eigen::VectorXd& measurements,
                       const BpdnOptions& options) {
  if (phi.rows() != measurements.size()) {
    throw DimensionMismatch("measurement length must equal the number of rows of Phi");
  }
  if (!(options.lambda >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  if (options.max_iter < 1) throw InvalidArgument("max_iter must be positive");

  const Eigen::Index n = phi.cols();
  BpdnResult result;
  result.estimate = Eigen::VectorXd::Zero(n);

  // lambda_max(Phi^T Phi) = lambda_max(Phi Phi^T); use the smaller Gram.
  const Eigen::MatrixXd gram =
      phi.rows() <= phi.cols() ? Eigen::MatrixXd(phi * phi.transpose())
                               : Eigen::MatrixXd(phi.transpose() * phi);
  const double lipschitz = 1.01 * max_eigenvalue_psd(gram);
  const double lambda = options.lambda;
  if (!(lipschitz > 0.0)) {
    result.converged = true;
    result.objective = bpdn_objective(phi, measurements, result.estimate, lambda);
    result.objective_trace.push_back(result.objective);
    return result;
  }
  const double step = 1.0 / lipschitz;
  const Eigen::VectorXd phit_y = phi.transpose() * measurements;

  Eigen::VectorXd x = result.estimate;
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd w = x;
  double t = 1.0;
  double objective = bpdn_objective(phi, measurements, x, lambda);
  std::vector<double> window{objective};
  result.objective_trace.push_back(objective);

  int it = 1;
  for (; it <= options.max_iter; ++it) {
    const Eigen::VectorXd gradient = phi.transpose() * (phi * w) - phit_y;
    const Eigen::VectorXd z = soft_threshold(w - step * gradient, step * lambda);
    const double z_objective = bpdn_objective(phi, measurements, z, lambda);

    if (z_objective <= objective) {
      x_prev = x;
      x = z;
      objective = z_objective;
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      w = x + ((t - 1.0) / t_next) * (x - x_prev);
      t = t_next;
    } else {
      // Momentum overshot: restart from x so the next step is a plain
      // proximal-gradient step, which cannot increase the objective. A flat
      // window therefore means a stationary point, not a momentum stall.
      w = x;
      t = 1.0;
    }

    window.push_back(objective);
    if (it % kWindow == 0) result.objective_trace.push_back(objective);
    if (static_cast<int>(window.size()) > kWindow) {
      const double old = window.front();
      window.erase(window.begin());
      if (old - objective <= options.tol * std::max(objective, 1e-300)) {
        result.converged = true;
        break;
      }
    }
  }
  result.iterations = std::min(it, options.max_iter);
  result.estimate = std::move(x);
  result.objective = objective;
  if (result.objective_trace.back() != objective) result.objective_trace.push_back(objective);
  return result;
}

std::vector<Eigen::Index> sample_subset(Eigen::Index population, Eigen::Index count,
                                        std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("subset size must be at least 1");
  if (count > population) throw InvalidArgument("subset larger than the dataset");
  std::vector<Eigen::Index> index(static_cast<std::size_t>(population));
  std::iota(index.begin(), index.end(), Eigen::Index{0});
  detail::Rng rng(seed);
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    const std::size_t pick = k + detail::uniform_index(rng, index.size() - k);
    std::swap(index[k], index[pick]);
  }
  index.resize(static_cast<std::size_t>(count));
  std::sort(index.begin(), index.end());
  return index;
}

RecoveryReport mse_sweep(const DataSet& data, const std::vector<LabeledMatrix>& matrices,
                         const RecoveryConfig& config) {
  const auto subset = sample_subset(data.size(), config.subset_size, config.seed);
  return mse_sweep(data, matrices, config, subset);
}

RecoveryReport mse_sweep(const DataSet& data, const std::vector<LabeledMatrix>& matrices,
                         const RecoveryConfig& config, std::span<const Eigen::Index> subset) {
  if (config.snr_grid.empty()) throw InvalidArgument("SNR grid is empty");
  if (subset.empty()) throw InvalidArgument("subset is empty");
  if (matrices.empty()) throw InvalidArgument("no matrices to evaluate");
  std::set<std::string> labels;
  for (const auto& m : matrices) {
    if (!labels.insert(m.label).second) throw InvalidArgument("duplicate matrix label '" + m.label + "'");
    if (m.phi.cols() != data.dim()) {
      throw DimensionMismatch("matrix '" + m.label + "' does not match the data dimension");
    }
  }
  for (auto j : subset) {
    if (j < 0 || j >= data.size()) throw InvalidArgument("subset index out of range");
  }

  const Eigen::Index n = data.dim();
  RecoveryReport report;
  report.subset.assign(subset.begin(), subset.end());
  for (std::size_t s = 0; s < config.snr_grid.size(); ++s) {
    const double snr = config.snr_grid[s];
    const std::uint64_t snr_seed = detail::derive_seed(config.seed, 1 + s);
    for (const auto& m : matrices) {
      RecoveryRow row;
      row.snr_db = snr;
      row.label = m.label;
      row.mse.reserve(subset.size());
      for (auto j : subset) {
        const Eigen::VectorXd x = data.point(j);
        const std::uint64_t noise_seed = detail::derive_seed(snr_seed, static_cast<std::uint64_t>(j));
        Eigen::VectorXd y;
        if (config.noise_side == NoiseSide::Signal) {
          y = m.phi * add_noise(x, snr, noise_seed);
        } else {
          y = add_noise(m.phi * x, snr, noise_seed);
        }
        BpdnOptions options;
        options.lambda = config.lambda_factor * (m.phi.transpose() * y).cwiseAbs().maxCoeff();
        options.max_iter = config.max_iter;
        options.tol = config.tol;
        const BpdnResult decoded = bpdn_decode(m.phi, y, options);
        if (!decoded.converged) ++row.unconverged;
        row.mse.push_back((x - decoded.estimate).squaredNorm() / static_cast<double>(n));
      }
      row.mean_mse = std::accumulate(row.mse.begin(), row.mse.end(), 0.0) /
                     static_cast<double>(row.mse.size());
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace amuse
