#pragma once

#include <Eigen/Core>

#include "amuse/secants.hpp"

namespace amuse {

/// Multiplicative-weights step size ln(1 + sqrt(2 ln(2M) / r)).
double step_size(Eigen::Index secant_count, Eigen::Index rank);

/// L_max = 1 + max_{i,l} V(i,l)^2; lies in (1, 2] for unit secants.
double loss_max(const SecantSet& secants);

/// Loss range when the primal plays rho u u^T: the losses rho (v.u)^2 - 1 lie
/// in [-1, rho - 1], so max(1 + max V^2, rho - 1). Equals loss_max(secants)
/// for rho <= 2.
double loss_max(const SecantSet& secants, double radius);

/// Additive suboptimality 2 (1 + sqrt 2) sqrt(ln(2M) / r) of the averaged
/// iterate relative to the best RIC.
double approximation_gap(Eigen::Index secant_count, Eigen::Index rank);

/// Residual bound for a perturbed linear model:
/// e + (1 + sqrt 2)(2 a + e) sqrt(ln(2M) / r), where e = ||e||_inf and
/// a = ||A(B_hat)||_inf.
double theorem_bound(double error_inf, double image_inf, Eigen::Index secant_count,
                     Eigen::Index rank);

struct BoundReport {
  double eta = 0.0;
  double loss_max = 0.0;
  double gap = 0.0;
  double theorem_rhs = 0.0;
  double error_inf = 0.0;
};

}  // namespace amuse
