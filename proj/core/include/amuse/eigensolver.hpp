#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "amuse/secants.hpp"

namespace amuse {

enum class EigenMethod {
  Auto,   // Dense when the operator fits under dense_cap, else Power
  Power,  // shifted power iteration, matrix-free
  Dense,  // materialize and run a full symmetric eigensolve
};

struct EigenControls {
  double tol = 1e-9;       // relative residual target
  int max_iter = 5000;     // power iteration cap
  std::uint64_t seed = 0;  // random start vector
  EigenMethod method = EigenMethod::Auto;
  Eigen::Index dense_cap = SymmetricOperator::kDefaultDenseCap;
  /// Known bound on the spectral radius; the power shift. Must be >= ||S||_2.
  double spectral_bound = 1.0;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm, first nonzero coordinate positive
  double residual = 0.0;   // ||S u - value u||
  int iterations = 0;
};

/// Smallest eigenpair of a symmetric operator whose spectrum lies in
/// [-b, b], b = controls.spectral_bound.
///
/// Power: iterate on (b I - S), whose spectrum is in [0, 2b] with the wanted
/// eigenvalue on top, until ||S u - lambda u|| <= tol * max(1, |lambda|).
/// Throws ConvergenceError with the best iterate when max_iter is exhausted.
/// Dense: full eigendecomposition of the materialized operator; the same
/// residual test is applied to its answer.
EigenPair min_eigenpair(const SymmetricOperator& op, const EigenControls& controls = {});

/// Largest eigenvalue of a symmetric PSD matrix by power iteration; used for
/// Lipschitz constants. Returns an estimate accurate to roughly `tol` relative.
double max_eigenvalue_psd(const Eigen::MatrixXd& gram, double tol = 1e-10,
                          int max_iter = 10000, std::uint64_t seed = 0);

/// Flips the sign so the first coordinate with non-negligible magnitude is positive.
void canonicalize_sign(Eigen::VectorXd& u);

}  // namespace amuse
