#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbff {

enum class ErrorKind {
  // usage / validation
  InvalidArgument,
  InvalidSpec,
  KOutOfRange,
  // data
  InvalidMatrix,
  HeaderMismatch,
  RaggedRow,
  NonFiniteValue,
  BadNumber,
  BadMagic,
  TruncatedPayload,
  TrailingBytes,
  LabelIndexOutOfRange,
  NegativeFeatureValue,
  SingleClass,
  DimensionMismatch,
  NonFiniteInput,
  EmptyClass,
  TooFewPoints,
  DegenerateEps,
  EmptyCalibrationSet,
  LengthMismatch,
  SchemaVersionMismatch,
  CorruptModel,
  DegenerateInput,
  // i/o
  MissingFile,
  IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a typed error kind plus optional row/column location.
/// Rows are 1-based data-row numbers (the header of a CSV file is row 0);
/// columns are 0-based feature indices.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> row = std::nullopt,
        std::optional<std::size_t> column = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

}  // namespace dbff
