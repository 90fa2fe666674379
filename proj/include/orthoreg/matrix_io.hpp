#pragma once

#include <filesystem>
#include <string>

#include "orthoreg/matrix.hpp"

namespace orthoreg {

// MATF v1: magic "ORTHMAT1", rows and cols as u32 little-endian, then
// rows*cols IEEE-754 binary64 little-endian values in row-major order.
inline constexpr char kMatfMagic[9] = "ORTHMAT1";

std::string encode_matf(const Matrix& m);
Matrix decode_matf(std::string_view bytes);

void write_matf(const std::filesystem::path& path, const Matrix& m);
Matrix read_matf(const std::filesystem::path& path);

/// One row per line, comma separated, shortest round-trip decimals.
std::string encode_matrix_csv(const Matrix& m);
Matrix decode_matrix_csv(std::string_view text);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Reads MATF when the file starts with the magic bytes, CSV otherwise.
Matrix read_matrix(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace orthoreg
