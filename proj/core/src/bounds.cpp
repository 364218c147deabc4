#include "amuse/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "amuse/errors.hpp"

namespace amuse {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;

void require_positive(Eigen::Index secant_count, Eigen::Index rank) {
  if (secant_count < 1) throw InvalidArgument("secant count must be positive");
  if (rank < 1) throw InvalidArgument("rank must be positive");
}

double log_ratio(Eigen::Index secant_count, Eigen::Index rank) {
  return std::log(2.0 * static_cast<double>(secant_count)) / static_cast<double>(rank);
}
}  // namespace

double step_size(Eigen::Index secant_count, Eigen::Index rank) {
  require_positive(secant_count, rank);
  return std::log1p(std::sqrt(2.0 * log_ratio(secant_count, rank)));
}

double loss_max(const SecantSet& secants) {
  return 1.0 + secants.directions().cwiseAbs2().maxCoeff();
}

double loss_max(const SecantSet& secants, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  return std::max(loss_max(secants), radius - 1.0);
}

double approximation_gap(Eigen::Index secant_count, Eigen::Index rank) {
  require_positive(secant_count, rank);
  return 2.0 * (1.0 + kSqrt2) * std::sqrt(log_ratio(secant_count, rank));
}

double theorem_bound(double error_inf, double image_inf, Eigen::Index secant_count,
                     Eigen::Index rank) {
  require_positive(secant_count, rank);
  if (error_inf < 0.0 || image_inf < 0.0) {
    throw InvalidArgument("theorem_bound inputs must be nonnegative");
  }
  return error_inf +
         (1.0 + kSqrt2) * (2.0 * image_inf + error_inf) * std::sqrt(log_ratio(secant_count, rank));
}

}  // namespace amuse
