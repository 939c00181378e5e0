#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dbff/feature_matrix.hpp"

namespace dbff {

enum class MatrixFormat { Csv, Binary };

// CSV: header `label,f0,...,f{d-1}`, one sample per line. LF or CRLF on
// input; the writer emits LF and 9 significant digits, which is enough to
// reproduce every float exactly.
FeatureMatrix load_csv(const std::filesystem::path& path);
void save_csv(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix parse_csv(const std::string& text);
std::string format_csv(const FeatureMatrix& m);

// Binary `.fmx`, all integers little-endian, no padding:
//   "FMX1" | u32 n | u32 d | u32 k | k x (u16 len, utf-8 bytes) |
//   n x u32 label | n*d x f32 row-major
FeatureMatrix load_binary(const std::filesystem::path& path);
void save_binary(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix decode_binary(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_binary(const FeatureMatrix& m);

/// Picks the loader from the file: `.fmx` extension or an `FMX` prefix selects
/// the binary reader, anything else is parsed as CSV.
FeatureMatrix load_matrix(const std::filesystem::path& path);

/// `.csv` extension selects CSV, everything else binary.
MatrixFormat format_for_path(const std::filesystem::path& path);
void save_matrix(const FeatureMatrix& m, const std::filesystem::path& path, MatrixFormat format);

// Whole-file helpers shared by the other persistence code.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::uint8_t* data,
                      std::size_t size);
void write_file_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dbff
