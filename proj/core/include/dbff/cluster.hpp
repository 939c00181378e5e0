#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dbff/feature_matrix.hpp"

namespace dbff {

struct DbscanParams {
  double eps = 1.0;         // closed neighborhood radius, euclidean
  std::size_t min_pts = 4;  // neighborhood size for a core point, self included

  /// Throws Error{InvalidArgument} unless eps > 0 (finite) and min_pts >= 1.
  void validate() const;
  friend bool operator==(const DbscanParams&, const DbscanParams&) = default;
};

inline constexpr std::size_t kDefaultMinPts = 4;
inline constexpr int kNoise = -1;

struct ClusterResult {
  std::vector<int> assignment;  // cluster id or kNoise
  std::vector<bool> core_flags;
  std::size_t cluster_count = 0;
};

/// Density clustering with self-inclusive closed eps-balls.
///
/// Core points are grouped into connected components of the core-to-core
/// eps-graph; cluster ids follow the lowest core index of each component.
/// A border point takes the cluster of the lowest-index core point within
/// eps of it. Never throws for valid params; an empty input yields an empty
/// result.
ClusterResult dbscan(const DenseMatrix& points, const DbscanParams& params);

/// 90th percentile (linear interpolation) over all points of the distance to
/// the min_pts-th nearest point, self included. Returns 0 when all points
/// coincide. Throws Error{TooFewPoints} unless points.rows() > min_pts.
double suggest_eps(const DenseMatrix& points, std::size_t min_pts);

/// Coordinate-wise median; even counts average the two middle values.
/// Throws Error{InvalidArgument} on an empty point set.
std::vector<double> coordinate_median(const DenseMatrix& points);

struct ClassFitInfo {
  std::size_t core_count = 0;  // non-noise rows that fed the median
  std::size_t cluster_count = 0;
  bool fallback = false;       // no non-noise rows; median over all class rows
};

/// One centroid per class in feature space.
class CentroidSet {
 public:
  /// Throws Error{InvalidArgument} on shape mismatch or non-finite entries.
  CentroidSet(std::vector<std::vector<double>> centroids, std::vector<std::string> class_names,
              std::vector<ClassFitInfo> fit_meta);

  std::size_t class_count() const noexcept { return centroids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> centroid(std::size_t cls) const { return centroids_[cls]; }
  const std::vector<std::vector<double>>& centroids() const noexcept { return centroids_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<ClassFitInfo>& fit_meta() const noexcept { return fit_meta_; }

 private:
  std::vector<std::vector<double>> centroids_;
  std::vector<std::string> class_names_;
  std::vector<ClassFitInfo> fit_meta_;
  std::size_t dim_ = 0;
};

/// Runs dbscan on each class's rows and takes the coordinate-wise median of
/// the non-noise rows, falling back to all class rows (flagged) when every
/// row is noise. Throws Error{EmptyClass} when a class has no rows.
CentroidSet fit_centroids(const FeatureMatrix& m, const DbscanParams& params);

}  // namespace dbff
