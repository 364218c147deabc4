#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "amuse/secants.hpp"

namespace amuse {

/// One primal iterate B^t = u u^T, or the zero matrix.
struct RankOneFactor {
  Eigen::VectorXd direction;  // empty when zero
  int step = 0;

  static RankOneFactor zero(int step) { return {Eigen::VectorXd{}, step}; }
  bool is_zero() const noexcept { return direction.size() == 0; }
};

/// Trace-rescaling policy. Fixed meets trace(B) = budget exactly; Auto picks
/// the scale minimizing ||s a - 1||_inf.
struct TraceMode {
  enum class Kind { Auto, Fixed };
  Kind kind = Kind::Auto;
  double budget = 0.0;

  static TraceMode automatic() { return {}; }
  static TraceMode fixed(double budget) { return {Kind::Fixed, budget}; }
  bool is_auto() const noexcept { return kind == Kind::Auto; }
};

/// B = (scale / r) * sum_t u_t u_t^T over r stored factors, equivalently the
/// r x n matrix Phi with rows sqrt(scale / r) * u_t^T. Prefixes of the factor
/// list are valid embeddings in their own right.
///
/// Solver and PCA factors are unit vectors; the Gaussian baseline stores raw
/// rows, which the same formulas handle.
class LearnedEmbedding {
 public:
  LearnedEmbedding() = default;
  LearnedEmbedding(Eigen::Index dim, std::vector<RankOneFactor> factors, double scale,
                   std::string label = {});

  Eigen::Index dim() const noexcept { return dim_; }
  Eigen::Index rank_budget() const noexcept { return static_cast<Eigen::Index>(factors_.size()); }
  const std::vector<RankOneFactor>& factors() const noexcept { return factors_; }
  double scale() const noexcept { return scale_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Number of non-zero factors; an upper bound on rank(B).
  Eigen::Index rank_used() const noexcept;
  /// trace(B) = (scale / r) * sum ||u_t||^2.
  double trace() const;

  /// n x k matrix of the non-zero directions.
  Eigen::MatrixXd directions() const;
  /// r x n, zero rows for zero factors.
  Eigen::MatrixXd phi() const;
  /// Dense n x n B.
  Eigen::MatrixXd gram() const;

  /// A(B) for the stored scale.
  OperatorImage image(const SecantSet& secants) const;
  /// A((1/r) sum u_t u_t^T), i.e. the image before scaling.
  OperatorImage unscaled_image(const SecantSet& secants) const;

  LearnedEmbedding with_scale(double scale) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<RankOneFactor> factors_;
  double scale_ = 1.0;
  std::string label_;
};

/// Scale for a target trace, or the l_inf-optimal scale 2 / (max a + min a).
/// Fixed mode throws DegenerateEmbedding when every factor is zero; Auto mode
/// returns an all-zero embedding unchanged.
LearnedEmbedding rescale(const LearnedEmbedding& embedding, const SecantSet& secants,
                         const TraceMode& mode);

/// s = 2 / (max a + min a); throws DegenerateEmbedding when a is all zero.
double auto_scale(const OperatorImage& unscaled);

/// First m factors averaged with weight 1/m and re-scaled with Auto.
LearnedEmbedding prefix_embedding(const LearnedEmbedding& embedding, Eigen::Index m,
                                  const SecantSet& secants);

}  // namespace amuse
