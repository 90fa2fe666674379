#include "orthoreg/matrix_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "orthoreg/errors.hpp"
#include "orthoreg/format.hpp"

namespace orthoreg {

namespace {

constexpr std::size_t kMagicLen = 8;
constexpr std::size_t kHeaderLen = kMagicLen + 8;

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::string_view in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return v;
}

}  // namespace

std::string encode_matf(const Matrix& m) {
  std::string out(kMatfMagic, kMagicLen);
  out.reserve(kHeaderLen + 8 * m.size());
  put_le(out, m.rows(), 4);
  put_le(out, m.cols(), 4);
  for (double x : m.data()) put_le(out, std::bit_cast<std::uint64_t>(x), 8);
  return out;
}

Matrix decode_matf(std::string_view bytes) {
  if (bytes.size() < kHeaderLen || bytes.substr(0, kMagicLen) != std::string_view(kMatfMagic)) {
    throw FormatError("not a MATF v1 file (bad magic)");
  }
  const auto rows = static_cast<std::size_t>(get_le(bytes, kMagicLen, 4));
  const auto cols = static_cast<std::size_t>(get_le(bytes, kMagicLen + 4, 4));
  if (rows == 0 || cols == 0) throw FormatError("MATF matrix has a zero dimension");
  const std::size_t expected = kHeaderLen + 8 * rows * cols;
  if (bytes.size() != expected) {
    throw FormatError("MATF payload length " + std::to_string(bytes.size()) + " != expected " +
                      std::to_string(expected));
  }
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = std::bit_cast<double>(get_le(bytes, kHeaderLen + 8 * i, 8));
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("MATF: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

void write_matf(const std::filesystem::path& path, const Matrix& m) {
  write_file(path, encode_matf(m));
}

Matrix read_matf(const std::filesystem::path& path) { return decode_matf(read_file(path)); }

std::string encode_matrix_csv(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out.push_back(',');
      out += format_double(m(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

Matrix decode_matrix_csv(std::string_view text) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    std::size_t field = 0;
    while (true) {
      const auto comma = line.find(',');
      const auto cell = line.substr(0, comma);
      ++field;
      const auto v = parse_double(cell);
      if (!v) throw ParseError("malformed number '" + std::string(trim(cell)) + "'", line_no, field);
      data.push_back(*v);
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) cols = field;
    if (field != cols) throw ParseError("expected " + std::to_string(cols) + " fields", line_no, field);
    ++rows;
  }
  if (rows == 0) throw FormatError("CSV matrix is empty");
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("CSV matrix: ") + e.what());
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  write_file(path, encode_matrix_csv(m));
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  return decode_matrix_csv(read_file(path));
}

Matrix read_matrix(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= kMagicLen && std::string_view(bytes).substr(0, kMagicLen) == kMatfMagic) {
    return decode_matf(bytes);
  }
  return decode_matrix_csv(bytes);
}

}  // namespace orthoreg
