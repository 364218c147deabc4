#include "amuse/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "amuse/errors.hpp"
#include "random.hpp"

namespace amuse {

namespace {

Eigen::VectorXd random_unit(Eigen::Index n, std::uint64_t seed) {
  detail::Gaussian gauss(seed);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = gauss();
  return x / x.norm();
}

}  // namespace

void canonicalize_sign(Eigen::VectorXd& u) {
  const double cutoff = 1e-10 * u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > cutoff) {
      if (u[i] < 0.0) u = -u;
      return;
    }
  }
}

namespace {

double residual_norm(const Eigen::MatrixXd& S, const Eigen::VectorXd& u, double lambda) {
  return (S * u - lambda * u).norm();
}

// Eigenvalues only, then inverse iteration at a shift just below lambda_min.
// Returns false when the answer misses the tolerance.
bool inverse_iteration(const Eigen::MatrixXd& S, const EigenControls& controls, EigenPair& out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values(S, Eigen::EigenvaluesOnly);
  if (values.info() != Eigen::Success) return false;
  const double lambda = values.eigenvalues()[0];
  const double scale = std::max(1.0, values.eigenvalues().cwiseAbs().maxCoeff());
  const double shift = lambda - 1e-10 * scale;
  const Eigen::Index n = S.rows();
  const Eigen::LDLT<Eigen::MatrixXd> factor(S - shift * Eigen::MatrixXd::Identity(n, n));
  if (factor.info() != Eigen::Success) return false;
  Eigen::VectorXd u = random_unit(n, controls.seed);
  for (int it = 1; it <= 4; ++it) {
    Eigen::VectorXd next = factor.solve(u);
    const double norm = next.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return false;
    u = next / norm;
    const double rayleigh = u.dot(S * u);
    const double residual = residual_norm(S, u, rayleigh);
    if (residual <= controls.tol * std::max(1.0, std::abs(rayleigh))) {
      out = {rayleigh, u, residual, it};
      return true;
    }
  }
  return false;
}

EigenPair dense_min_eigenpair(const SymmetricOperator& op, const EigenControls& controls) {
  const Eigen::MatrixXd S = op.dense(controls.dense_cap);
  EigenPair fast;
  if (inverse_iteration(S, controls, fast)) {
    canonicalize_sign(fast.vector);
    return fast;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("dense symmetric eigensolve failed", 0.0, Eigen::VectorXd{},
                           std::numeric_limits<double>::infinity());
  }
  EigenPair out;
  out.value = eig.eigenvalues()[0];
  out.vector = eig.eigenvectors().col(0).normalized();
  out.residual = (S * out.vector - out.value * out.vector).norm();
  out.iterations = 1;
  canonicalize_sign(out.vector);
  if (out.residual > controls.tol * std::max(1.0, std::abs(out.value))) {
    throw ConvergenceError("dense eigenpair misses the residual tolerance", out.value, out.vector,
                           out.residual);
  }
  return out;
}

}  // namespace

EigenPair min_eigenpair(const SymmetricOperator& op, const EigenControls& controls) {
  if (controls.tol <= 0.0) throw InvalidArgument("eigen tolerance must be positive");
  if (controls.max_iter < 1) throw InvalidArgument("eigen iteration cap must be positive");
  if (!(controls.spectral_bound >= 0.0)) throw InvalidArgument("spectral bound must be >= 0");

  const bool dense = controls.method == EigenMethod::Dense ||
                     (controls.method == EigenMethod::Auto && op.dim() <= controls.dense_cap);
  if (dense) return dense_min_eigenpair(op, controls);

  const Eigen::Index n = op.dim();
  const double shift = controls.spectral_bound;
  Eigen::VectorXd u = random_unit(n, controls.seed);
  Eigen::VectorXd Su = op(u);

  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= controls.max_iter; ++it) {
    const double lambda = u.dot(Su);
    const double residual = (Su - lambda * u).norm();
    if (residual < best.residual) {
      best.value = lambda;
      best.vector = u;
      best.residual = residual;
      best.iterations = it;
    }
    if (residual <= controls.tol * std::max(1.0, std::abs(lambda))) {
      EigenPair out{lambda, u, residual, it};
      canonicalize_sign(out.vector);
      return out;
    }
    // (b I - S) u
    Eigen::VectorXd next = shift * u - Su;
    const double norm = next.norm();
    if (norm == 0.0) {
      // Only reachable if S u = b u exactly, which the residual test accepts,
      // so restart from a fresh random vector.
      next = random_unit(n, controls.seed + static_cast<std::uint64_t>(it));
    } else {
      next /= norm;
    }
    u = std::move(next);
    Su = op(u);
  }
  canonicalize_sign(best.vector);
  throw ConvergenceError("min_eigenpair: no convergence after " +
                             std::to_string(controls.max_iter) + " iterations",
                         best.value, best.vector, best.residual);
}

double max_eigenvalue_psd(const Eigen::MatrixXd& gram, double tol, int max_iter,
                          std::uint64_t seed) {
  if (gram.rows() != gram.cols()) throw DimensionMismatch("Gram matrix must be square");
  const Eigen::Index n = gram.rows();
  if (n == 0) return 0.0;
  Eigen::VectorXd u = random_unit(n, seed);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd v = gram * u;
    const double next = u.dot(v);
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    u = v / norm;
    if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
      return std::max(next, norm);
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace amuse
