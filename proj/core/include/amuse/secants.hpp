#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "amuse/dataset.hpp"

namespace amuse {

/// A(B) = diag(V^T B V): one quadratic form per secant.
using OperatorImage = Eigen::VectorXd;

struct SecantPair {
  Eigen::Index first;
  Eigen::Index second;
  friend bool operator==(const SecantPair&, const SecantPair&) = default;
};

/// Unit-norm pairwise differences of a dataset, stored as columns of V (n x M).
///
/// Copies share the same immutable storage.
class SecantSet {
 public:
  SecantSet(Eigen::MatrixXd directions, std::vector<SecantPair> pairs);

  Eigen::Index dim() const noexcept { return directions_->rows(); }
  Eigen::Index size() const noexcept { return directions_->cols(); }
  const Eigen::MatrixXd& directions() const noexcept { return *directions_; }
  const std::vector<SecantPair>& pairs() const noexcept { return pairs_; }
  std::shared_ptr<const Eigen::MatrixXd> shared_directions() const noexcept { return directions_; }

 private:
  std::shared_ptr<const Eigen::MatrixXd> directions_;
  std::vector<SecantPair> pairs_;
};

struct SecantOptions {
  std::optional<Eigen::Index> max_count;  // nullopt keeps every pair
  double min_distance = 1e-12;
  std::uint64_t seed = 0;
};

/// Enumerates all p(p-1)/2 pairs (i < j), drops those with ||x_i - x_j|| <=
/// min_distance, normalizes (x_i - x_j). When more than max_count survive a
/// seeded uniform subsample without replacement is kept. Columns are ordered
/// by (i, j).
SecantSet build_secants(const DataSet& data, const SecantOptions& options = {});

/// Dense form: diag(V^T B V) for symmetric n x n B.
OperatorImage apply_operator(const SecantSet& secants, const Eigen::MatrixXd& B);

/// Factor form: B = sum_t c_t u_t u_t^T with u_t the columns of `factors`.
/// Computes sum_t c_t (V^T u_t)^2 without forming B.
OperatorImage apply_operator(const SecantSet& secants, const Eigen::MatrixXd& factors,
                             const Eigen::VectorXd& weights);

/// Self-adjoint linear map on R^n, evaluated matrix-free.
class SymmetricOperator {
 public:
  using Apply = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Materialize = std::function<Eigen::MatrixXd()>;

  SymmetricOperator(Eigen::Index dim, Apply apply, Materialize materialize = {});

  /// Wraps an explicit symmetric matrix.
  static SymmetricOperator from_dense(Eigen::MatrixXd matrix);

  Eigen::Index dim() const noexcept { return dim_; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  /// Dense n x n matrix. Throws InvalidArgument when n > max_dim.
  Eigen::MatrixXd dense(Eigen::Index max_dim = kDefaultDenseCap) const;

  static constexpr Eigen::Index kDefaultDenseCap = 1024;

 private:
  Eigen::Index dim_;
  Apply apply_;
  Materialize materialize_;
};

/// A*(w) = V diag(w) V^T, acting as x -> V (w .* (V^T x)).
SymmetricOperator apply_adjoint(const SecantSet& secants, Eigen::VectorXd weights);

/// A*_+(w) = A*(w_1 - w_2) where w = [w_1; w_2] has length 2M.
SymmetricOperator plus_adjoint(const SecantSet& secants, const Eigen::VectorXd& weights);

}  // namespace amuse
