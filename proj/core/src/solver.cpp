#include "amuse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amuse/errors.hpp"
#include "random.hpp"

namespace amuse {

namespace {

double log_sum_exp(const Eigen::VectorXd& x) {
  const double peak = x.maxCoeff();
  if (!std::isfinite(peak)) return peak;
  return peak + std::log((x.array() - peak).exp().sum());
}

double running_delta(const OperatorImage& image_sum) {
  const double hi = image_sum.maxCoeff();
  const double lo = image_sum.minCoeff();
  if (!(hi > 0.0)) return 1.0;
  return (hi - lo) / (hi + lo);
}

OperatorImage factor_image(const SecantSet& secants, const RankOneFactor& factor) {
  if (factor.is_zero()) return OperatorImage::Zero(secants.size());
  if (factor.direction.size() != secants.dim()) {
    throw DimensionMismatch("factor length differs from secant dimension");
  }
  return (secants.directions().transpose() * factor.direction).cwiseAbs2();
}

}  // namespace

DualWeights::DualWeights(Eigen::VectorXd log_weights) : log_weights_(std::move(log_weights)) {}

DualWeights DualWeights::uniform(Eigen::Index secant_count) {
  if (secant_count < 1) throw InvalidArgument("secant count must be positive");
  const Eigen::Index size = 2 * secant_count;
  return DualWeights(Eigen::VectorXd::Constant(size, -std::log(static_cast<double>(size))));
}

DualWeights DualWeights::from_probabilities(const Eigen::VectorXd& probabilities) {
  if (probabilities.size() < 2 || probabilities.size() % 2 != 0) {
    throw DimensionMismatch("dual weights need an even, positive length");
  }
  if ((probabilities.array() < 0.0).any() || !probabilities.allFinite()) {
    throw InvalidArgument("dual weights must be finite and nonnegative");
  }
  const double total = probabilities.sum();
  if (!(total > 0.0)) throw InvalidArgument("dual weights must have positive mass");
  // std::log keeps log(0) = -inf; the vectorized path floors it near -745
  return DualWeights((probabilities / total).unaryExpr([](double p) { return std::log(p); }));
}

Eigen::VectorXd DualWeights::values() const {
  return log_weights_.unaryExpr([](double l) { return std::exp(l); });
}

Eigen::VectorXd DualWeights::signed_weights() const {
  const Eigen::VectorXd w = values();
  const Eigen::Index M = secant_count();
  return w.head(M) - w.tail(M);
}

Eigen::VectorXd constraint_losses(const OperatorImage& image, const OperatorImage& target) {
  if (image.size() != target.size()) throw DimensionMismatch("image and target lengths differ");
  const Eigen::Index M = image.size();
  Eigen::VectorXd losses(2 * M);
  losses.head(M) = image - target;
  losses.tail(M) = target - image;
  return losses;
}

double game_loss(const SecantSet& secants, const DualWeights& weights, const Eigen::MatrixXd& B,
                 const OperatorImage& target) {
  if (weights.secant_count() != secants.size() || target.size() != secants.size()) {
    throw DimensionMismatch("game_loss: weights, target and secants disagree");
  }
  return weights.values().dot(constraint_losses(apply_operator(secants, B), target));
}

double game_loss(const SecantSet& secants, const DualWeights& weights,
                 const RankOneFactor& factor, const OperatorImage& target) {
  if (weights.secant_count() != secants.size() || target.size() != secants.size()) {
    throw DimensionMismatch("game_loss: weights, target and secants disagree");
  }
  return weights.values().dot(constraint_losses(factor_image(secants, factor), target));
}

RankOneFactor primal_step(const SecantSet& secants, const DualWeights& weights,
                          const EigenControls& controls, double zero_threshold, int step,
                          PrimalDiagnostics* diagnostics) {
  if (weights.secant_count() != secants.size()) {
    throw DimensionMismatch("dual weights do not match the secant count");
  }
  const Eigen::VectorXd signed_weights = weights.signed_weights();
  // ||sum_l c_l v_l v_l^T||_2 <= ||c||_1 for unit v_l.
  EigenControls tuned = controls;
  tuned.spectral_bound = std::min(controls.spectral_bound, signed_weights.lpNorm<1>());
  const SymmetricOperator S = apply_adjoint(secants, signed_weights);
  const EigenPair pair = min_eigenpair(S, tuned);
  if (diagnostics != nullptr) *diagnostics = {pair.value, pair.residual, pair.iterations};
  if (pair.value < -zero_threshold) return RankOneFactor{pair.vector, step};
  return RankOneFactor::zero(step);
}

DualWeights dual_update(const DualWeights& weights, const Eigen::VectorXd& losses, double eta,
                        double loss_max) {
  if (losses.size() != weights.size()) throw DimensionMismatch("one loss per dual weight");
  if (!losses.allFinite()) throw InvalidArgument("dual update received non-finite losses");
  if (!(loss_max > 0.0) || !std::isfinite(loss_max)) {
    throw InvalidArgument("loss_max must be positive");
  }
  if (eta < 0.0 || !std::isfinite(eta)) throw InvalidArgument("step size must be nonnegative");
  if (losses.cwiseAbs().maxCoeff() > loss_max * (1.0 + 1e-12)) {
    throw InvalidArgument("loss exceeds loss_max");
  }
  Eigen::VectorXd next = weights.log_weights() + (eta / loss_max) * losses;
  next.array() -= log_sum_exp(next);
  return DualWeights(std::move(next));
}

std::vector<double> radius_candidates(const GameConfig& config, Eigen::Index dim) {
  if (config.radius) return {*config.radius};
  if (!config.trace.is_auto()) return {config.trace.budget};
  if (!config.radius_grid.empty()) return config.radius_grid;
  std::vector<double> grid{1.0};
  while (grid.back() < static_cast<double>(dim)) grid.push_back(2.0 * grid.back());
  return grid;
}

SolveResult solve_at_radius(const SecantSet& secants, const GameConfig& config, double radius) {
  if (config.rank < 1) throw InvalidArgument("rank must be at least 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("radius must be positive");
  if (config.eta_override && !(*config.eta_override > 0.0)) {
    throw InvalidArgument("eta override must be positive");
  }
  const Eigen::Index M = secants.size();
  const OperatorImage target = OperatorImage::Ones(M);

  SolveResult result;
  result.radius = radius;
  result.bounds.eta = config.eta_override.value_or(step_size(M, config.rank));
  result.bounds.loss_max = loss_max(secants, radius);
  result.bounds.gap = approximation_gap(M, config.rank);
  result.bounds.error_inf = config.error_inf;

  DualWeights weights = DualWeights::uniform(M);
  OperatorImage image_sum = OperatorImage::Zero(M);
  std::vector<RankOneFactor> factors;
  factors.reserve(static_cast<std::size_t>(config.rank));
  result.iterations.reserve(static_cast<std::size_t>(config.rank));

  for (int t = 1; t <= config.rank; ++t) {
    EigenControls controls = config.eig;
    controls.seed = detail::derive_seed(config.seed, static_cast<std::uint64_t>(t));
    IterationRecord record;
    record.step = t;
    RankOneFactor factor;
    PrimalDiagnostics diagnostics;
    try {
      factor = primal_step(secants, weights, controls, config.zero_threshold, t, &diagnostics);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("solve aborted at step " + std::to_string(t) + " of " +
                                 std::to_string(config.rank) + ": " + e.what(),
                             e.lambda(), e.vector(), e.residual());
    }
    record.zero_step = factor.is_zero();
    record.lambda_min = diagnostics.lambda_min;
    record.eig_iterations = diagnostics.eig_iterations;

    const OperatorImage image = radius * factor_image(secants, factor);
    weights = dual_update(weights, constraint_losses(image, target), result.bounds.eta,
                          result.bounds.loss_max);

    const Eigen::VectorXd probs = weights.values();
    record.weight_sum_error = std::abs(probs.sum() - 1.0);
    record.weight_min = probs.minCoeff();
    if (record.weight_sum_error > 1e-9 || record.weight_min < 0.0) {
      throw Error("dual weights left the simplex at step " + std::to_string(t));
    }

    image_sum += image;
    record.delta_running = running_delta(image_sum);
    factors.push_back(std::move(factor));
    result.iterations.push_back(record);
  }

  result.embedding = LearnedEmbedding(secants.dim(), std::move(factors), radius, "amuse");
  const OperatorImage averaged = result.embedding.image(secants);
  result.bounds.theorem_rhs =
      theorem_bound(config.error_inf, averaged.cwiseAbs().maxCoeff(), M, config.rank);
  result.final_weights = std::move(weights);
  return result;
}

SolveResult solve(const SecantSet& secants, const GameConfig& config) {
  if (config.rank < 1) throw InvalidArgument("rank must be at least 1");
  if (!config.trace.is_auto() && !(config.trace.budget > 0.0)) {
    throw InvalidArgument("trace budget must be positive");
  }
  const auto radii = radius_candidates(config, secants.dim());
  std::optional<SolveResult> best;
  double best_delta = 0.0;
  std::vector<RadiusTrial> trials;
  for (const double radius : radii) {
    SolveResult run = solve_at_radius(secants, config, radius);
    run.embedding = rescale(run.embedding, secants, config.trace);
    const double delta = (run.embedding.image(secants).array() - 1.0).abs().maxCoeff();
    trials.push_back({radius, delta});
    if (!best || delta < best_delta) {
      best = std::move(run);
      best_delta = delta;
    }
  }
  best->radius_search = std::move(trials);
  return std::move(*best);
}

}  // namespace amuse
