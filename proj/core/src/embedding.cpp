#include "amuse/embedding.hpp"

#include <cmath>

#include "amuse/errors.hpp"

namespace amuse {

LearnedEmbedding::LearnedEmbedding(Eigen::Index dim, std::vector<RankOneFactor> factors,
                                   double scale, std::string label)
    : dim_(dim), factors_(std::move(factors)), scale_(scale), label_(std::move(label)) {
  if (dim_ < 1) throw InvalidArgument("embedding dimension must be positive");
  if (factors_.empty()) throw InvalidArgument("embedding needs at least one factor slot");
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw InvalidArgument("embedding scale must be positive and finite");
  }
  for (const auto& f : factors_) {
    if (!f.is_zero() && f.direction.size() != dim_) {
      throw DimensionMismatch("factor length differs from embedding dimension");
    }
  }
}

Eigen::Index LearnedEmbedding::rank_used() const noexcept {
  Eigen::Index k = 0;
  for (const auto& f : factors_) k += f.is_zero() ? 0 : 1;
  return k;
}

double LearnedEmbedding::trace() const {
  double total = 0.0;
  for (const auto& f : factors_) {
    if (!f.is_zero()) total += f.direction.squaredNorm();
  }
  return scale_ / static_cast<double>(rank_budget()) * total;
}

Eigen::MatrixXd LearnedEmbedding::directions() const {
  Eigen::MatrixXd U(dim_, rank_used());
  Eigen::Index k = 0;
  for (const auto& f : factors_) {
    if (!f.is_zero()) U.col(k++) = f.direction;
  }
  return U;
}

Eigen::MatrixXd LearnedEmbedding::phi() const {
  const double row_scale = std::sqrt(scale_ / static_cast<double>(rank_budget()));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rank_budget(), dim_);
  for (std::size_t t = 0; t < factors_.size(); ++t) {
    if (!factors_[t].is_zero()) {
      out.row(static_cast<Eigen::Index>(t)) = row_scale * factors_[t].direction.transpose();
    }
  }
  return out;
}

Eigen::MatrixXd LearnedEmbedding::gram() const {
  const Eigen::MatrixXd U = directions();
  return (scale_ / static_cast<double>(rank_budget())) * (U * U.transpose());
}

OperatorImage LearnedEmbedding::unscaled_image(const SecantSet& secants) const {
  if (secants.dim() != dim_) throw DimensionMismatch("secant and embedding dimensions differ");
  const Eigen::MatrixXd U = directions();
  const Eigen::VectorXd w =
      Eigen::VectorXd::Constant(U.cols(), 1.0 / static_cast<double>(rank_budget()));
  return apply_operator(secants, U, w);
}

OperatorImage LearnedEmbedding::image(const SecantSet& secants) const {
  return scale_ * unscaled_image(secants);
}

LearnedEmbedding LearnedEmbedding::with_scale(double scale) const {
  return LearnedEmbedding(dim_, factors_, scale, label_);
}

double auto_scale(const OperatorImage& unscaled) {
  if (unscaled.size() == 0) throw InvalidArgument("empty operator image");
  const double hi = unscaled.maxCoeff();
  const double lo = unscaled.minCoeff();
  if (!(hi > 0.0)) throw DegenerateEmbedding("operator image is identically zero");
  return 2.0 / (hi + lo);
}

LearnedEmbedding rescale(const LearnedEmbedding& embedding, const SecantSet& secants,
                         const TraceMode& mode) {
  if (mode.is_auto()) {
    const OperatorImage unscaled = embedding.unscaled_image(secants);
    // A zero image has residual 1 under every scale; leave it as is.
    if (!(unscaled.maxCoeff() > 0.0)) return embedding;
    return embedding.with_scale(auto_scale(unscaled));
  }
  if (!(mode.budget > 0.0)) throw InvalidArgument("trace budget must be positive");
  const double unscaled_trace = embedding.with_scale(1.0).trace();
  if (!(unscaled_trace > 0.0)) {
    throw DegenerateEmbedding("cannot meet a trace budget with only zero factors");
  }
  return embedding.with_scale(mode.budget / unscaled_trace);
}

LearnedEmbedding prefix_embedding(const LearnedEmbedding& embedding, Eigen::Index m,
                                  const SecantSet& secants) {
  if (m < 1 || m > embedding.rank_budget()) {
    throw InvalidArgument("prefix length " + std::to_string(m) + " outside [1, " +
                          std::to_string(embedding.rank_budget()) + "]");
  }
  std::vector<RankOneFactor> head(embedding.factors().begin(),
                                  embedding.factors().begin() + m);
  LearnedEmbedding prefix(embedding.dim(), std::move(head), 1.0, embedding.label());
  return rescale(prefix, secants, TraceMode::automatic());
}

}  // namespace amuse
