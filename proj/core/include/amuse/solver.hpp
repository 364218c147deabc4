#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "amuse/bounds.hpp"
#include "amuse/eigensolver.hpp"
#include "amuse/embedding.hpp"
#include "amuse/secants.hpp"

namespace amuse {

/// Point on the 2M-simplex, kept as normalized log-weights so that long runs
/// never underflow. The first M entries weight the constraints a_l - 1, the
/// last M their negations.
class DualWeights {
 public:
  /// Uniform 1 / (2M).
  static DualWeights uniform(Eigen::Index secant_count);
  /// Normalizes nonnegative `probabilities` (length 2M, positive sum).
  static DualWeights from_probabilities(const Eigen::VectorXd& probabilities);

  Eigen::Index size() const noexcept { return log_weights_.size(); }
  Eigen::Index secant_count() const noexcept { return log_weights_.size() / 2; }
  const Eigen::VectorXd& log_weights() const noexcept { return log_weights_; }
  Eigen::VectorXd values() const;
  /// w_1 - w_2, the weight fed to the secant adjoint.
  Eigen::VectorXd signed_weights() const;

 private:
  explicit DualWeights(Eigen::VectorXd log_weights);
  Eigen::VectorXd log_weights_;

  friend DualWeights dual_update(const DualWeights&, const Eigen::VectorXd&, double, double);
};

struct GameConfig {
  Eigen::Index rank = 100;
  TraceMode trace = TraceMode::automatic();
  EigenControls eig{};
  std::uint64_t seed = 0;
  std::optional<double> eta_override;
  /// lambda_min of A*_+(N) at or above -zero_threshold yields the zero step.
  double zero_threshold = 1e-10;
  /// Assumed ||e||_inf for the perturbed-model bound in the report.
  double error_inf = 0.0;
  /// Trace radius rho of the primal ball, B^t = rho u u^T. When unset, Fixed
  /// trace plays at rho = budget and Auto searches `radius_grid`.
  std::optional<double> radius;
  /// Candidate radii for Auto; empty means 1, 2, 4, ... up to the first power
  /// of two >= n.
  std::vector<double> radius_grid;
};

/// The radii Auto mode tries for a given config and ambient dimension.
std::vector<double> radius_candidates(const GameConfig& config, Eigen::Index dim);

/// L(N, B) = <N, A_+(B) - f> with f = [y; -y].
double game_loss(const SecantSet& secants, const DualWeights& weights, const Eigen::MatrixXd& B,
                 const OperatorImage& target);
double game_loss(const SecantSet& secants, const DualWeights& weights,
                 const RankOneFactor& factor, const OperatorImage& target);

/// Per-constraint losses L(e_j, B) for j in [2M] given a = A(B) and y.
Eigen::VectorXd constraint_losses(const OperatorImage& image, const OperatorImage& target);

struct PrimalDiagnostics {
  double lambda_min = 0.0;
  double residual = 0.0;
  int eig_iterations = 0;
};

/// Best response over the PSD unit-trace ball: u u^T for the minimizing
/// eigenvector of A*_+(N) when lambda_min < -zero_threshold, else zero.
/// On a ball of radius rho the response is rho u u^T for the same u.
RankOneFactor primal_step(const SecantSet& secants, const DualWeights& weights,
                          const EigenControls& controls, double zero_threshold = 1e-10,
                          int step = 0, PrimalDiagnostics* diagnostics = nullptr);

/// N_j <- N_j exp(eta l_j / L_max), renormalized; evaluated in log-space.
DualWeights dual_update(const DualWeights& weights, const Eigen::VectorXd& losses, double eta,
                        double loss_max);

struct IterationRecord {
  int step = 0;
  bool zero_step = false;
  double lambda_min = 0.0;
  int eig_iterations = 0;
  double delta_running = 1.0;  // Auto-scaled RIC of the running average
  double weight_sum_error = 0.0;  // |sum N - 1| after the update
  double weight_min = 0.0;
};

struct RadiusTrial {
  double radius = 0.0;
  double delta_hat = 0.0;  // after Auto rescale
};

struct SolveResult {
  LearnedEmbedding embedding;
  BoundReport bounds;
  std::vector<IterationRecord> iterations;
  DualWeights final_weights = DualWeights::uniform(1);
  double radius = 1.0;
  std::vector<RadiusTrial> radius_search;  // one entry per radius tried
};

/// Runs `config.rank` rounds of the multiplicative-weights game against rank-1
/// best responses on the trace ball of radius rho, averages the iterates and
/// rescales per `config.trace`. Target y is the all-ones image.
///
/// Auto trace without an explicit radius repeats the game over
/// radius_candidates() and keeps the run with the smallest Auto-scaled RIC
/// (ties go to the smaller radius).
SolveResult solve(const SecantSet& secants, const GameConfig& config);

/// One game at a fixed radius without rescaling: the embedding holds the unit
/// factors with scale rho, i.e. B_hat = (rho / r) sum u_t u_t^T.
SolveResult solve_at_radius(const SecantSet& secants, const GameConfig& config, double radius);

}  // namespace amuse
