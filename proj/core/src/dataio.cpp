#include "dbff/dataio.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>
#include <unordered_map>

#include "dbff/error.hpp"

namespace dbff {

namespace {

constexpr std::array<char, 4> kMagic = {'F', 'M', 'X', '1'};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

float parse_value(std::string_view token, std::size_t row, std::size_t col) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) throw Error(ErrorKind::BadNumber, "empty field", row, col);
  float value = 0.0f;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::invalid_argument || ptr != token.data() + token.size()) {
    throw Error(ErrorKind::BadNumber, "'" + std::string(token) + "'", row, col);
  }
  if (ec == std::errc::result_out_of_range) {
    // Overflow is non-finite; underflow rounds like strtod would.
    std::string copy(token);
    double wide = std::strtod(copy.c_str(), nullptr);
    value = static_cast<float>(wide);
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFiniteValue, "'" + std::string(token) + "'", row, col);
  }
  return value;
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  void require(std::uint64_t count, const char* what) const {
    if (bytes_.size() - pos_ < count) {
      throw Error(ErrorKind::TruncatedPayload, std::string("while reading ") + what);
    }
  }
  std::uint16_t u16(const char* what) {
    require(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    require(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::string text(std::size_t len, const char* what) {
    require(len, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " exceeds u32 range");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

FeatureMatrix parse_csv(const std::string& text) {
  std::string_view body(text);
  if (body.substr(0, 3) == "\xEF\xBB\xBF") body.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto nl = body.find('\n', start);
    auto line = body.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorKind::HeaderMismatch, "empty file");

  auto header = split_fields(lines.front());
  if (header.size() < 2 || header[0] != "label") {
    throw Error(ErrorKind::HeaderMismatch, "expected 'label,f0,...'");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t f = 0; f < d; ++f) {
    if (header[f + 1] != "f" + std::to_string(f)) {
      throw Error(ErrorKind::HeaderMismatch,
                  "column " + std::to_string(f + 1) + " should be 'f" + std::to_string(f) + "'");
    }
  }

  std::vector<float> values;
  std::vector<ClassIndex> labels;
  std::vector<std::string> names;
  std::unordered_map<std::string, ClassIndex> index_of;
  values.reserve((lines.size() - 1) * d);

  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li]);
    if (fields.size() != d + 1) {
      throw Error(ErrorKind::RaggedRow,
                  "expected " + std::to_string(d + 1) + " fields, got " +
                      std::to_string(fields.size()),
                  li);
    }
    std::string name(fields[0]);
    if (name.empty()) throw Error(ErrorKind::InvalidMatrix, "empty label", li);
    auto [it, inserted] = index_of.try_emplace(name, static_cast<ClassIndex>(names.size()));
    if (inserted) names.push_back(name);
    labels.push_back(it->second);
    for (std::size_t f = 0; f < d; ++f) values.push_back(parse_value(fields[f + 1], li, f));
  }

  const std::size_t n = labels.size();
  return FeatureMatrix(n, d, std::move(values), std::move(labels), std::move(names));
}

std::string format_csv(const FeatureMatrix& m) {
  std::string out = "label";
  for (std::size_t f = 0; f < m.cols(); ++f) out += ",f" + std::to_string(f);
  out += '\n';
  for (const auto& name : m.class_names()) {
    if (name.find_first_of(",\r\n") != std::string::npos) {
      throw Error(ErrorKind::InvalidArgument,
                  "class name '" + name + "' cannot be written to CSV");
    }
  }
  std::array<char, 64> buf{};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += m.class_names()[m.labels()[r]];
    for (float v : m.row(r)) {
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                               std::chars_format::general, 9);
      out += ',';
      out.append(buf.data(), res.ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureMatrix load_csv(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  return parse_csv(std::string(bytes.begin(), bytes.end()));
}

void save_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
  write_file_text(path, format_csv(m));
}

std::vector<std::uint8_t> encode_binary(const FeatureMatrix& m) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_u32(out, checked_u32(m.rows(), "row count"));
  put_u32(out, checked_u32(m.cols(), "column count"));
  put_u32(out, checked_u32(m.class_count(), "class count"));
  for (const auto& name : m.class_names()) {
    if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorKind::InvalidArgument, "class name longer than 65535 bytes");
    }
    put_u16(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
  }
  for (auto label : m.labels()) put_u32(out, label);
  out.reserve(out.size() + m.values().size() * 4);
  for (float v : m.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

FeatureMatrix decode_binary(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMagic.size()) throw Error(ErrorKind::TruncatedPayload, "missing magic");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::BadMagic, "expected FMX1");
  }
  ByteReader in(bytes);
  in.text(4, "magic");
  const std::uint32_t n = in.u32("row count");
  const std::uint32_t d = in.u32("column count");
  const std::uint32_t k = in.u32("class count");

  std::vector<std::string> names;
  names.reserve(std::min<std::size_t>(k, in.remaining() / 2));
  for (std::uint32_t i = 0; i < k; ++i) {
    auto len = in.u16("class name length");
    names.push_back(in.text(len, "class name"));
  }

  in.require(std::uint64_t{n} * 4, "labels");
  std::vector<ClassIndex> labels(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    labels[r] = in.u32("label");
    if (labels[r] >= k) {
      throw Error(ErrorKind::LabelIndexOutOfRange,
                  "label " + std::to_string(labels[r]) + " >= class count " + std::to_string(k),
                  r + 1);
    }
  }

  const std::uint64_t cells = std::uint64_t{n} * d;
  in.require(cells * 4, "values");
  std::vector<float> values(cells);
  for (auto& v : values) v = std::bit_cast<float>(in.u32("value"));
  if (in.remaining() != 0) {
    throw Error(ErrorKind::TrailingBytes, std::to_string(in.remaining()) + " unread bytes");
  }
  return FeatureMatrix(n, d, std::move(values), std::move(labels), std::move(names));
}

FeatureMatrix load_binary(const std::filesystem::path& path) {
  return decode_binary(read_file_bytes(path));
}

void save_binary(const FeatureMatrix& m, const std::filesystem::path& path) {
  auto bytes = encode_binary(m);
  write_file_bytes(path, bytes.data(), bytes.size());
}

FeatureMatrix load_matrix(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  const bool fmx_prefix = bytes.size() >= 3 && bytes[0] == 'F' && bytes[1] == 'M' && bytes[2] == 'X';
  if (path.extension() == ".fmx" || fmx_prefix) return decode_binary(bytes);
  return parse_csv(std::string(bytes.begin(), bytes.end()));
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::Binary;
}

void save_matrix(const FeatureMatrix& m, const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::Csv) {
    save_csv(m, path);
  } else {
    save_binary(m, path);
  }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(ErrorKind::MissingFile, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::IoFailure, "read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, const std::uint8_t* data,
                      std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + path.string());
}

void write_file_text(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

}  // namespace dbff
