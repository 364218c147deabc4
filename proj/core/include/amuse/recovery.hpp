#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "amuse/dataset.hpp"

namespace amuse {

/// x + w with w i.i.d. Gaussian, E||w||^2 = ||x||^2 / 10^(snr_db / 10).
/// snr_db is capped at 300. Throws InvalidArgument for a zero signal.
Eigen::VectorXd add_noise(const Eigen::VectorXd& signal, double snr_db, std::uint64_t seed);

struct BpdnOptions {
  double lambda = 0.0;
  int max_iter = 3000;
  double tol = 1e-7;  // relative objective decrease over a 10-iteration window
};

struct BpdnResult {
  Eigen::VectorXd estimate;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  /// Objective sampled every 10 iterations (and at the end).
  std::vector<double> objective_trace;
};

/// Approximate argmin 0.5 ||y - Phi z||^2 + lambda ||z||_1 by FISTA with a momentum
/// restart whenever a step would raise the objective (monotone by construction),
/// with step 1 / lambda_max(Phi^T Phi). Non-convergence sets `converged`
/// false rather than throwing.
BpdnResult bpdn_decode(const Eigen::MatrixXd& phi, const Eigen::VectorXd& measurements,
                       const BpdnOptions& options);

/// 0.5 ||y - Phi z||^2 + lambda ||z||_1.
double bpdn_objective(const Eigen::MatrixXd& phi, const Eigen::VectorXd& measurements,
                      const Eigen::VectorXd& z, double lambda);

enum class NoiseSide { Signal, Measurement };

struct RecoveryConfig {
  std::vector<double> snr_grid{5, 10, 15, 20, 25, 30, 35, 40};
  Eigen::Index subset_size = 50;
  double lambda_factor = 0.1;  // lambda = lambda_factor * ||Phi^T y||_inf
  int max_iter = 3000;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  NoiseSide noise_side = NoiseSide::Signal;
};

struct LabeledMatrix {
  std::string label;
  Eigen::MatrixXd phi;  // r x n
};

struct RecoveryRow {
  double snr_db = 0.0;
  std::string label;
  double mean_mse = 0.0;
  std::vector<double> mse;  // per signal, in subset order
  int unconverged = 0;
};

struct RecoveryReport {
  std::vector<Eigen::Index> subset;
  std::vector<RecoveryRow> rows;  // snr-major, matrices in input order
};

/// Seeded subset of dataset indices, sorted ascending.
std::vector<Eigen::Index> sample_subset(Eigen::Index population, Eigen::Index count,
                                        std::uint64_t seed);

/// Encodes noisy signals with each matrix and decodes by BPDN; one row per
/// (snr, matrix). Noise draws depend on (seed, snr, dataset index) only, so
/// every matrix sees the same corruption.
RecoveryReport mse_sweep(const DataSet& data, const std::vector<LabeledMatrix>& matrices,
                         const RecoveryConfig& config);
RecoveryReport mse_sweep(const DataSet& data, const std::vector<LabeledMatrix>& matrices,
                         const RecoveryConfig& config, std::span<const Eigen::Index> subset);

}  // namespace amuse
