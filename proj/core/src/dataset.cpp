#include "amuse/dataset.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "amuse/csv.hpp"
#include "amuse/errors.hpp"

namespace amuse {

DataSet::DataSet(Eigen::MatrixXd points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
  if (points_.rows() < 1) throw InvalidArgument("dataset dimension must be at least 1");
  if (points_.cols() < 2) throw InvalidArgument("dataset needs at least 2 points");
  if (!points_.allFinite()) throw InvalidArgument("dataset contains non-finite entries");
}

DataSet generate_translated_squares(int side, int square) {
  if (side < 1 || square < 1) throw InvalidArgument("side and square must be positive");
  if (square > side) throw InvalidArgument("square must not exceed side");
  const int shifts = side - square + 1;
  const Eigen::Index n = Eigen::Index{side} * side;
  const Eigen::Index p = Eigen::Index{shifts} * shifts;
  if (p < 2) throw InvalidArgument("square == side yields a single image; need at least 2");

  Eigen::MatrixXd points = Eigen::MatrixXd::Zero(n, p);
  Eigen::Index j = 0;
  for (int top = 0; top < shifts; ++top) {
    for (int left = 0; left < shifts; ++left, ++j) {
      for (int row = top; row < top + square; ++row) {
        for (int col = left; col < left + square; ++col) {
          points(Eigen::Index{row} * side + col, j) = 1.0;
        }
      }
    }
  }
  return DataSet(std::move(points), "translated-squares side=" + std::to_string(side) +
                                        " square=" + std::to_string(square));
}

DataSet load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset", path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      throw ParseError("empty row", lineno);
    }
    const auto fields = csv::split(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto field : fields) {
      double v = 0.0;
      if (!csv::parse_double(field, v)) {
        throw ParseError("non-numeric field '" + std::string(field) + "'", lineno);
      }
      if (!std::isfinite(v)) throw ParseError("non-finite value", lineno);
      row.push_back(v);
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(row.size()),
                       lineno);
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failure", path.string());
  if (rows.size() < 2) throw ParseError("dataset needs at least 2 rows", lineno + 1);

  Eigen::MatrixXd points(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < width; ++i) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
    }
  }
  return DataSet(std::move(points), path.filename().string());
}

void save_dataset(const DataSet& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  const auto& pts = data.points();
  std::string line;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    line.clear();
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      if (i > 0) line += ',';
      line += csv::format_exact(pts(i, j));
    }
    line += '\n';
    out << line;
  }
  out.flush();
  if (!out) throw IoError("write failure", path.string());
}

}  // namespace amuse
