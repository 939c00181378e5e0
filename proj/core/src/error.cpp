#include "dbff/error.hpp"

namespace dbff {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::HeaderMismatch: return "HeaderMismatch";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::BadNumber: return "BadNumber";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::TrailingBytes: return "TrailingBytes";
    case ErrorKind::LabelIndexOutOfRange: return "LabelIndexOutOfRange";
    case ErrorKind::NegativeFeatureValue: return "NegativeFeatureValue";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateEps: return "DegenerateEps";
    case ErrorKind::EmptyCalibrationSet: return "EmptyCalibrationSet";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorKind::CorruptModel: return "CorruptModel";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<std::size_t> row,
                     std::optional<std::size_t> column) {
  std::string out(to_string(kind));
  if (row || column) {
    out += "(";
    if (row) out += "row " + std::to_string(*row);
    if (row && column) out += ", ";
    if (column) out += "column " + std::to_string(*column);
    out += ")";
  }
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> row, std::optional<std::size_t> column)
    : std::runtime_error(decorate(kind, message, row, column)),
      kind_(kind),
      row_(row),
      column_(column) {}

}  // namespace dbff
