#include "dbff/feature_matrix.hpp"

#include <cmath>
#include <unordered_set>

#include "dbff/error.hpp"

namespace dbff {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::InvalidArgument, "dense matrix payload size does not match shape");
  }
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<float> values,
                             std::vector<ClassIndex> labels,
                             std::vector<std::string> class_names)
    : rows_(rows),
      cols_(cols),
      values_(std::move(values)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
  if (rows_ == 0) throw Error(ErrorKind::InvalidMatrix, "matrix must have at least one row");
  if (cols_ == 0) throw Error(ErrorKind::InvalidMatrix, "matrix must have at least one column");
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorKind::InvalidMatrix, "value count does not equal rows * cols");
  }
  if (labels_.size() != rows_) {
    throw Error(ErrorKind::InvalidMatrix, "label count does not equal row count");
  }
  if (class_names_.empty()) throw Error(ErrorKind::InvalidMatrix, "no class names");

  std::unordered_set<std::string> seen;
  for (const auto& name : class_names_) {
    if (name.empty()) throw Error(ErrorKind::InvalidMatrix, "empty class name");
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::InvalidMatrix, "duplicate class name '" + name + "'");
    }
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (labels_[r] >= class_names_.size()) {
      throw Error(ErrorKind::LabelIndexOutOfRange,
                  "label " + std::to_string(labels_[r]) + " >= class count", r + 1);
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!std::isfinite(values_[r * cols_ + c])) {
        throw Error(ErrorKind::NonFiniteValue, "", r + 1, c);
      }
    }
  }
}

std::vector<std::size_t> FeatureMatrix::class_counts() const {
  std::vector<std::size_t> counts(class_names_.size(), 0);
  for (auto label : labels_) ++counts[label];
  return counts;
}

DenseMatrix FeatureMatrix::class_rows(ClassIndex cls) const {
  std::vector<double> out;
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (labels_[r] != cls) continue;
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
    ++n;
  }
  return DenseMatrix(n, cols_, std::move(out));
}

DenseMatrix FeatureMatrix::to_dense() const {
  return DenseMatrix(rows_, cols_, std::vector<double>(values_.begin(), values_.end()));
}

}  // namespace dbff
