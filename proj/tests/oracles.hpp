#pragma once

// Independent reference implementations. Nothing here calls into the code
// under test beyond reading FeatureMatrix/DenseMatrix contents.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "dbff/feature_matrix.hpp"

namespace dbff::oracle {

/// Chi-square from an explicit (feature mass) x (class) contingency table,
/// accumulated in long double, expected counts from row/column marginals.
inline std::vector<double> chi_square(const FeatureMatrix& m) {
  const std::size_t k = m.class_count();
  std::vector<double> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    std::vector<long double> table(k, 0.0L);
    std::vector<long double> class_rows(k, 0.0L);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t r = 0; r < m.rows(); ++r) {
        if (m.labels()[r] != c) continue;
        table[c] += m.at(r, f);
        class_rows[c] += 1.0L;
      }
    }
    const long double grand = std::accumulate(table.begin(), table.end(), 0.0L);
    const long double n = static_cast<long double>(m.rows());
    long double stat = 0.0L;
    for (std::size_t c = 0; c < k; ++c) {
      const long double expected = grand * (class_rows[c] / n);
      if (expected == 0.0L) continue;
      stat += (table[c] - expected) * (table[c] - expected) / expected;
    }
    out.push_back(static_cast<double>(stat));
  }
  return out;
}

struct DbscanTruth {
  std::vector<bool> core;
  std::vector<bool> clustered;        // core or within eps of a core point
  std::vector<std::size_t> component;  // union-find root for core points
};

/// Full distance matrix, threshold counting, union-find over core-core edges.
inline DbscanTruth dbscan(const DenseMatrix& pts, double eps, std::size_t min_pts) {
  const std::size_t n = pts.rows();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < pts.cols(); ++c) s += (pts(i, c) - pts(j, c)) * (pts(i, c) - pts(j, c));
      dist[i][j] = std::sqrt(s);
    }
  }
  DbscanTruth t;
  t.core.assign(n, false);
  t.clustered.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) count += dist[i][j] <= eps;
    t.core[i] = count >= min_pts;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (t.core[i] && t.core[j] && dist[i][j] <= eps) parent[find(i)] = find(j);
    }
  }
  t.component.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.core[i]) {
      t.component[i] = find(i);
      t.clustered[i] = true;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (t.core[j] && dist[i][j] <= eps) t.clustered[i] = true;
    }
  }
  return t;
}

/// Sort each column fully; even counts average the middle pair.
inline std::vector<double> median(const DenseMatrix& pts) {
  std::vector<double> out;
  for (std::size_t c = 0; c < pts.cols(); ++c) {
    std::vector<double> col;
    for (std::size_t r = 0; r < pts.rows(); ++r) col.push_back(pts(r, c));
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    out.push_back(n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]));
  }
  return out;
}

/// Largest number of abstentions a strict threshold can produce without
/// exceeding target_rate * n. Enumerates every candidate threshold.
inline std::size_t best_abstention_count(const std::vector<double>& gaps, double target_rate) {
  const std::size_t n = gaps.size();
  std::size_t allowed = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (static_cast<double>(i) / static_cast<double>(n) <= target_rate) allowed = i;
  }
  std::vector<double> candidates(gaps);
  candidates.push_back(0.0);
  candidates.push_back(*std::max_element(gaps.begin(), gaps.end()) + 1.0);
  std::size_t best = 0;
  for (double t : candidates) {
    std::size_t below = 0;
    for (double g : gaps) below += g < t;
    if (below <= allowed) best = std::max(best, below);
  }
  return best;
}

/// Eigenvectors of the sample covariance, largest eigenvalue first.
struct Eigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

inline Eigenpairs covariance_eigen(const DenseMatrix& pts) {
  const auto n = static_cast<Eigen::Index>(pts.rows());
  const auto d = static_cast<Eigen::Index>(pts.cols());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) x(r, c) = pts(r, c);
  }
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  Eigenpairs out;
  for (Eigen::Index i = d - 1; i >= 0; --i) {
    out.values.push_back(solver.eigenvalues()(i));
    std::vector<double> v(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] = solver.eigenvectors()(j, i);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace dbff::oracle
