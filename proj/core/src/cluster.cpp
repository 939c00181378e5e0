#include "dbff/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dbff/error.hpp"

namespace dbff {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace

void DbscanParams::validate() const {
  if (!std::isfinite(eps) || eps <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "eps must be finite and > 0");
  }
  if (min_pts < 1) throw Error(ErrorKind::InvalidArgument, "min_pts must be >= 1");
}

ClusterResult dbscan(const DenseMatrix& points, const DbscanParams& params) {
  params.validate();
  const std::size_t n = points.rows();
  ClusterResult result;
  result.assignment.assign(n, kNoise);
  result.core_flags.assign(n, false);

  std::vector<std::size_t> neighbors(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (euclidean(points.row(i), points.row(j)) <= params.eps) {
        ++neighbors[i];
        ++neighbors[j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) result.core_flags[i] = neighbors[i] >= params.min_pts;

  int next_id = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!result.core_flags[seed] || result.assignment[seed] != kNoise) continue;
    const int id = next_id++;
    result.assignment[seed] = id;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q = 0; q < n; ++q) {
        if (!result.core_flags[q] || result.assignment[q] != kNoise) continue;
        if (euclidean(points.row(p), points.row(q)) <= params.eps) {
          result.assignment[q] = id;
          frontier.push_back(q);
        }
      }
    }
  }
  result.cluster_count = static_cast<std::size_t>(next_id);

  for (std::size_t p = 0; p < n; ++p) {
    if (result.core_flags[p]) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (result.core_flags[q] && euclidean(points.row(p), points.row(q)) <= params.eps) {
        result.assignment[p] = result.assignment[q];
        break;
      }
    }
  }
  return result;
}

double suggest_eps(const DenseMatrix& points, std::size_t min_pts) {
  const std::size_t n = points.rows();
  if (min_pts < 1) throw Error(ErrorKind::InvalidArgument, "min_pts must be >= 1");
  if (n <= min_pts) {
    throw Error(ErrorKind::TooFewPoints, "need more than " + std::to_string(min_pts) +
                                             " points, got " + std::to_string(n));
  }
  std::vector<double> kth(n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[j] = euclidean(points.row(i), points.row(j));
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(min_pts - 1),
                     dist.end());
    kth[i] = dist[min_pts - 1];
  }
  std::sort(kth.begin(), kth.end());
  const double pos = 0.9 * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return kth[lo] + frac * (kth[hi] - kth[lo]);
}

std::vector<double> coordinate_median(const DenseMatrix& points) {
  const std::size_t n = points.rows();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "median of an empty point set");
  std::vector<double> out(points.cols());
  std::vector<double> column(n);
  const std::size_t mid = n / 2;
  for (std::size_t c = 0; c < points.cols(); ++c) {
    for (std::size_t r = 0; r < n; ++r) column[r] = points(r, c);
    auto mid_it = column.begin() + static_cast<std::ptrdiff_t>(mid);
    std::nth_element(column.begin(), mid_it, column.end());
    if (n % 2 == 1) {
      out[c] = *mid_it;
    } else {
      const double upper = *mid_it;
      const double lower = *std::max_element(column.begin(), mid_it);
      out[c] = 0.5 * (lower + upper);
    }
  }
  return out;
}

CentroidSet::CentroidSet(std::vector<std::vector<double>> centroids,
                         std::vector<std::string> class_names,
                         std::vector<ClassFitInfo> fit_meta)
    : centroids_(std::move(centroids)),
      class_names_(std::move(class_names)),
      fit_meta_(std::move(fit_meta)) {
  if (centroids_.empty()) throw Error(ErrorKind::InvalidArgument, "no centroids");
  if (class_names_.size() != centroids_.size() || fit_meta_.size() != centroids_.size()) {
    throw Error(ErrorKind::InvalidArgument, "one centroid, name and fit record per class");
  }
  dim_ = centroids_.front().size();
  if (dim_ == 0) throw Error(ErrorKind::InvalidArgument, "centroids must have d >= 1");
  for (const auto& c : centroids_) {
    if (c.size() != dim_) throw Error(ErrorKind::InvalidArgument, "ragged centroids");
    for (double v : c) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite centroid");
    }
  }
}

CentroidSet fit_centroids(const FeatureMatrix& m, const DbscanParams& params) {
  params.validate();
  std::vector<std::vector<double>> centroids;
  std::vector<ClassFitInfo> meta;
  for (std::size_t cls = 0; cls < m.class_count(); ++cls) {
    const DenseMatrix rows = m.class_rows(static_cast<ClassIndex>(cls));
    if (rows.rows() == 0) {
      throw Error(ErrorKind::EmptyClass, "class '" + m.class_names()[cls] + "' has no rows");
    }
    const ClusterResult clusters = dbscan(rows, params);
    std::vector<double> kept;
    std::size_t kept_rows = 0;
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      if (clusters.assignment[r] == kNoise) continue;
      const auto src = rows.row(r);
      kept.insert(kept.end(), src.begin(), src.end());
      ++kept_rows;
    }
    ClassFitInfo info;
    info.cluster_count = clusters.cluster_count;
    info.core_count = kept_rows;
    if (kept_rows == 0) {
      info.fallback = true;
      centroids.push_back(coordinate_median(rows));
    } else {
      centroids.push_back(coordinate_median(DenseMatrix(kept_rows, rows.cols(), std::move(kept))));
    }
    meta.push_back(info);
  }
  return CentroidSet(std::move(centroids), m.class_names(), std::move(meta));
}

}  // namespace dbff
