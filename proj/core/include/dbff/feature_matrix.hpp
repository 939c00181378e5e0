#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dbff {

using ClassIndex = std::uint32_t;

/// Row-major n x d matrix of doubles. Used for point sets handed to the
/// clustering and projection code; carries no labels.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Labeled n x d matrix of 32-bit feature values.
///
/// Invariants, enforced by the constructor (throws Error{InvalidMatrix} or
/// Error{LabelIndexOutOfRange}):
///   - n >= 1, d >= 1, values.size() == n * d, all values finite
///   - 1 <= |class_names|, names non-empty and unique
///   - every label < |class_names|
/// Immutable after construction.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<float> values,
                std::vector<ClassIndex> labels, std::vector<std::string> class_names);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t class_count() const noexcept { return class_names_.size(); }

  float at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const float> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const float> values() const noexcept { return values_; }
  std::span<const ClassIndex> labels() const noexcept { return labels_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  /// Number of rows carrying each class label.
  std::vector<std::size_t> class_counts() const;

  /// Rows with label `cls`, widened to double, in original order.
  DenseMatrix class_rows(ClassIndex cls) const;

  /// Every row widened to double.
  DenseMatrix to_dense() const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<float> values_;
  std::vector<ClassIndex> labels_;
  std::vector<std::string> class_names_;
};

}  // namespace dbff
