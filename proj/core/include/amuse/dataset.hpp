#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

namespace amuse {

/// Training corpus: p points in R^n stored as the columns of an n x p matrix.
///
/// Immutable after construction; the constructor enforces p >= 2, n >= 1 and
/// finite entries.
class DataSet {
 public:
  DataSet(Eigen::MatrixXd points, std::string label);

  Eigen::Index dim() const noexcept { return points_.rows(); }
  Eigen::Index size() const noexcept { return points_.cols(); }
  const Eigen::MatrixXd& points() const noexcept { return points_; }
  auto point(Eigen::Index j) const { return points_.col(j); }
  const std::string& label() const noexcept { return label_; }

  friend bool operator==(const DataSet& a, const DataSet& b) {
    return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
           a.points_ == b.points_;
  }

 private:
  Eigen::MatrixXd points_;
  std::string label_;
};

/// Every placement of a `square` x `square` block of ones inside a
/// `side` x `side` zero image, flattened row-major. Placements are ordered by
/// top row, then left column, giving p = (side - square + 1)^2 points.
DataSet generate_translated_squares(int side, int square);

/// One sample per CSV row, no header. Throws ParseError naming the line.
DataSet load_dataset(const std::filesystem::path& path);

/// Writes shortest round-trip decimal representations, so load(save(d)) == d.
void save_dataset(const DataSet& data, const std::filesystem::path& path);

}  // namespace amuse
