#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dbff/feature_matrix.hpp"

namespace dbff {

/// Default number of retained features; clamped to d by callers.
inline constexpr std::size_t kDefaultSelectK = 1024;

/// Per-feature chi-square scores against the class label.
///
/// For feature f, the observed mass of class c is the sum of f over the rows
/// of class c, and the expected mass is total(f) * n_c / n. The score is
/// sum_c (O - E)^2 / E. Features with zero total mass score 0, and classes
/// without rows contribute nothing. Accumulation runs over rows in
/// ascending order, so results are bitwise reproducible.
///
/// Throws Error{SingleClass} with fewer than two classes and
/// Error{NegativeFeatureValue} on any negative cell.
std::vector<double> chi_square_scores(const FeatureMatrix& m);

/// Scores plus a top-k retention mask. Retained features outrank dropped
/// ones; equal scores keep the lower index.
class FeatureSelector {
 public:
  /// Validates the invariants; throws Error{InvalidArgument} or
  /// Error{KOutOfRange}.
  FeatureSelector(std::vector<double> scores, std::vector<bool> mask);

  std::size_t k() const noexcept { return k_; }
  std::size_t d_original() const noexcept { return scores_.size(); }
  const std::vector<double>& scores() const noexcept { return scores_; }
  const std::vector<bool>& mask() const noexcept { return mask_; }
  std::vector<std::size_t> retained_indices() const;

  friend bool operator==(const FeatureSelector&, const FeatureSelector&) = default;

 private:
  std::vector<double> scores_;
  std::vector<bool> mask_;
  std::size_t k_ = 0;
};

/// Keeps the k highest-scoring features of `scores`.
FeatureSelector select_top_k(std::vector<double> scores, std::size_t k);

/// chi_square_scores followed by select_top_k. Throws Error{KOutOfRange}
/// unless 1 <= k <= d.
FeatureSelector fit_selector(const FeatureMatrix& m, std::size_t k);

/// Drops unselected columns, keeping relative column order and labels.
/// Throws Error{DimensionMismatch} when m.cols() != sel.d_original().
FeatureMatrix apply_selector(const FeatureSelector& sel, const FeatureMatrix& m);

/// Same projection for a single sample.
std::vector<double> apply_selector(const FeatureSelector& sel, std::span<const double> sample);

/// Copy of `m` where each column with a negative minimum is shifted up so
/// that minimum becomes 0. Columns already nonnegative are untouched.
FeatureMatrix shift_to_nonnegative(const FeatureMatrix& m);

/// `{ "d": ..., "k": ..., "scores": [...], "mask": [...] }`
std::string selector_to_json(const FeatureSelector& sel);
/// Throws Error{CorruptModel} on malformed input.
FeatureSelector selector_from_json(const std::string& text);

}  // namespace dbff
