#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "amuse/dataset.hpp"
#include "amuse/embedding.hpp"
#include "amuse/secants.hpp"

namespace amuse {

/// Empirical RIC over a secant set: delta_hat = ||A(B) - 1||_inf.
struct RicReport {
  double delta_hat = 0.0;
  double residual_max = 0.0;
  double residual_min = 0.0;
  double residual_mean = 0.0;
  Eigen::Index rank_used = 0;
  double trace = 0.0;
};

RicReport empirical_ric(const SecantSet& secants, const LearnedEmbedding& embedding);
/// Dense symmetric B; rank_used is the numerical rank of B.
RicReport empirical_ric(const SecantSet& secants, const Eigen::MatrixXd& B);

struct PcaBaseline {
  LearnedEmbedding embedding;
  Eigen::Index components = 0;  // directions actually available
  bool rank_deficient = false;  // fewer than the requested rank
};

/// Top principal directions of the mean-centred sample covariance with equal
/// weights, rescaled like the solver output.
PcaBaseline pca_baseline(const DataSet& data, Eigen::Index rank, const TraceMode& mode,
                         const SecantSet& secants);

/// r x n i.i.d. standard normal rows (not orthonormalized), scaled to meet `mode`.
LearnedEmbedding gaussian_baseline(Eigen::Index dim, Eigen::Index rank, const TraceMode& mode,
                                   std::uint64_t seed, const SecantSet& secants);

/// (delta + epsilon) / (1 - epsilon); epsilon in [0, 1), delta >= 0.
double generalization_bound(double delta, double epsilon);

struct GeneralizationReport {
  double delta_hat = 0.0;   // training-secant RIC used as delta
  double epsilon = 0.0;
  int trials = 0;
  double bound = 0.0;        // linear-form bound alpha on | ||Phi z|| - 1 |
  double upper_sq_bound = 0.0;  // (1 + alpha)^2 - 1
  double lower_sq_bound = 0.0;  // 1 - (1 - alpha)^2
  double max_linear_distortion = 0.0;
  double max_sq_distortion = 0.0;  // max | ||Phi z||^2 - 1 |
  double max_sq_excess = 0.0;      // max (||Phi z||^2 - 1)
  double max_sq_deficit = 0.0;     // max (1 - ||Phi z||^2)
  bool passed = false;
};

/// Per trial: pick a training point x, draw a unit z with ||z - x/||x|| || <=
/// epsilon, and compare ||Phi z|| against the perturbation bound computed from
/// the embedding's RIC on `secants`.
GeneralizationReport empirical_generalization(const DataSet& data,
                                              const LearnedEmbedding& embedding,
                                              const SecantSet& secants, double epsilon,
                                              int trials, std::uint64_t seed);

}  // namespace amuse
