#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbff/feature_matrix.hpp"

namespace dbff {

struct PowerIterationOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-9;  // stop when successive unit vectors differ by less
  std::uint64_t seed = 0;   // start vectors
};

struct Projection {
  DenseMatrix coords;  // n x 2, raw (uncentered) samples dotted with each direction
  std::array<std::vector<double>, 2> directions;  // unit length
  std::array<double, 2> variances{};              // eigenvalues of the sample covariance
  bool degenerate = false;  // covariance rank < 2: raw coordinates 0 and 1 were used
  std::string warning;
};

/// Sample covariance (n - 1 denominator), d x d.
DenseMatrix covariance(const DenseMatrix& points);

/// Top two principal directions by power iteration with deflation. The
/// largest-magnitude entry of each direction is made positive. Throws
/// Error{InvalidArgument} unless points has >= 3 rows and >= 2 columns.
Projection project_top2(const DenseMatrix& points, const PowerIterationOptions& options = {});

struct ScatterStyle {
  std::string title;
  int width = 640;
  int height = 480;
};

/// Deterministic SVG scatter: one color per class, abstained samples drawn
/// hollow when `abstained` is given.
std::string render_scatter_svg(const DenseMatrix& coords, const std::vector<ClassIndex>& labels,
                               const std::vector<std::string>& class_names,
                               const std::optional<std::vector<bool>>& abstained,
                               const ScatterStyle& style);

}  // namespace dbff
