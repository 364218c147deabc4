#include "amuse/secants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "amuse/errors.hpp"
#include "random.hpp"

namespace amuse {

SecantSet::SecantSet(Eigen::MatrixXd directions, std::vector<SecantPair> pairs)
    : directions_(std::make_shared<const Eigen::MatrixXd>(std::move(directions))),
      pairs_(std::move(pairs)) {
  if (directions_->cols() < 1) throw EmptySecantSet("secant set is empty");
  if (static_cast<Eigen::Index>(pairs_.size()) != directions_->cols()) {
    throw InvalidArgument("secant pair list does not match column count");
  }
  for (Eigen::Index l = 0; l < directions_->cols(); ++l) {
    if (std::abs(directions_->col(l).norm() - 1.0) > 1e-12) {
      throw InvalidArgument("secant column " + std::to_string(l) + " is not unit norm");
    }
  }
}

SecantSet build_secants(const DataSet& data, const SecantOptions& options) {
  if (options.min_distance < 0.0) throw InvalidArgument("min_distance must be nonnegative");
  if (options.max_count && *options.max_count < 1) {
    throw InvalidArgument("max_count must be positive");
  }
  const auto& X = data.points();
  const Eigen::Index p = X.cols();

  std::vector<SecantPair> kept;
  kept.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if ((X.col(i) - X.col(j)).norm() > options.min_distance) kept.push_back({i, j});
    }
  }
  if (kept.empty()) throw EmptySecantSet("every pair is within min_distance");

  if (options.max_count && static_cast<std::size_t>(*options.max_count) < kept.size()) {
    const auto count = static_cast<std::size_t>(*options.max_count);
    std::vector<std::size_t> index(kept.size());
    std::iota(index.begin(), index.end(), std::size_t{0});
    detail::Rng rng(options.seed);
    // Partial Fisher-Yates: the first `count` slots become the sample.
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t pick = k + detail::uniform_index(rng, index.size() - k);
      std::swap(index[k], index[pick]);
    }
    index.resize(count);
    std::sort(index.begin(), index.end());
    std::vector<SecantPair> sample;
    sample.reserve(count);
    for (auto k : index) sample.push_back(kept[k]);
    kept = std::move(sample);
  }

  Eigen::MatrixXd V(X.rows(), static_cast<Eigen::Index>(kept.size()));
  for (Eigen::Index l = 0; l < V.cols(); ++l) {
    const auto& [i, j] = kept[static_cast<std::size_t>(l)];
    V.col(l) = X.col(i) - X.col(j);
    V.col(l) /= V.col(l).norm();
  }
  return SecantSet(std::move(V), std::move(kept));
}

OperatorImage apply_operator(const SecantSet& secants, const Eigen::MatrixXd& B) {
  if (B.rows() != secants.dim() || B.cols() != secants.dim()) {
    throw DimensionMismatch("operator argument must be " + std::to_string(secants.dim()) +
                            " x " + std::to_string(secants.dim()));
  }
  const auto& V = secants.directions();
  const Eigen::MatrixXd BV = B * V;
  return V.cwiseProduct(BV).colwise().sum().transpose();
}

OperatorImage apply_operator(const SecantSet& secants, const Eigen::MatrixXd& factors,
                             const Eigen::VectorXd& weights) {
  if (factors.rows() != secants.dim()) {
    throw DimensionMismatch("factor length must equal the ambient dimension");
  }
  if (factors.cols() != weights.size()) {
    throw DimensionMismatch("one weight per factor required");
  }
  if (factors.cols() == 0) return OperatorImage::Zero(secants.size());
  const Eigen::MatrixXd proj = secants.directions().transpose() * factors;  // M x k
  return proj.cwiseAbs2() * weights;
}

SymmetricOperator::SymmetricOperator(Eigen::Index dim, Apply apply, Materialize materialize)
    : dim_(dim), apply_(std::move(apply)), materialize_(std::move(materialize)) {
  if (dim_ < 1) throw InvalidArgument("operator dimension must be positive");
  if (!apply_) throw InvalidArgument("operator needs an apply function");
}

SymmetricOperator SymmetricOperator::from_dense(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols()) throw DimensionMismatch("matrix must be square");
  auto shared = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  return SymmetricOperator(
      shared->rows(), [shared](const Eigen::VectorXd& x) -> Eigen::VectorXd { return *shared * x; },
      [shared] { return *shared; });
}

Eigen::VectorXd SymmetricOperator::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("operator input has wrong length");
  return apply_(x);
}

Eigen::MatrixXd SymmetricOperator::dense(Eigen::Index max_dim) const {
  if (dim_ > max_dim) {
    throw InvalidArgument("refusing to materialize a " + std::to_string(dim_) + " x " +
                          std::to_string(dim_) + " operator (cap " + std::to_string(max_dim) +
                          ")");
  }
  if (materialize_) return materialize_();
  Eigen::MatrixXd out(dim_, dim_);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
  for (Eigen::Index k = 0; k < dim_; ++k) {
    e[k] = 1.0;
    out.col(k) = apply_(e);
    e[k] = 0.0;
  }
  return out;
}

SymmetricOperator apply_adjoint(const SecantSet& secants, Eigen::VectorXd weights) {
  if (weights.size() != secants.size()) {
    throw DimensionMismatch("adjoint weight length must equal the secant count");
  }
  auto V = secants.shared_directions();
  auto w = std::make_shared<const Eigen::VectorXd>(std::move(weights));
  return SymmetricOperator(
      V->rows(),
      [V, w](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXd coeff = w->cwiseProduct(V->transpose() * x);
        return *V * coeff;
      },
      [V, w] {
        // Split columns by the sign of their weight so each half is a
        // symmetric rank-k update computing only one triangle.
        const Eigen::Index n = V->rows();
        Eigen::Index pos = 0;
        Eigen::Index neg = 0;
        for (Eigen::Index l = 0; l < w->size(); ++l) {
          pos += (*w)[l] > 0.0;
          neg += (*w)[l] < 0.0;
        }
        Eigen::MatrixXd up(n, pos);
        Eigen::MatrixXd down(n, neg);
        pos = neg = 0;
        for (Eigen::Index l = 0; l < w->size(); ++l) {
          const double c = (*w)[l];
          if (c > 0.0) up.col(pos++) = std::sqrt(c) * V->col(l);
          if (c < 0.0) down.col(neg++) = std::sqrt(-c) * V->col(l);
        }
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
        if (pos > 0) out.selfadjointView<Eigen::Lower>().rankUpdate(up, 1.0);
        if (neg > 0) out.selfadjointView<Eigen::Lower>().rankUpdate(down, -1.0);
        out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
        return out;
      });
}

SymmetricOperator plus_adjoint(const SecantSet& secants, const Eigen::VectorXd& weights) {
  const Eigen::Index M = secants.size();
  if (weights.size() != 2 * M) {
    throw DimensionMismatch("plus-adjoint weight length must be 2M");
  }
  return apply_adjoint(secants, weights.head(M) - weights.tail(M));
}

}  // namespace amuse
