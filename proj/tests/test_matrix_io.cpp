#include <doctest.h>

#include <filesystem>

#include "oracles.hpp"
#include "orthoreg/errors.hpp"
#include "orthoreg/format.hpp"
#include "orthoreg/matrix_io.hpp"

using namespace orthoreg;

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.001) == "0.001");
  CHECK(format_double(1e-6) == "1e-06");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.0) == "0");
  CHECK(parse_double(" 2.5 ") == 2.5);
  CHECK_FALSE(parse_double("2.5x").has_value());
  CHECK_FALSE(parse_double("").has_value());
  const Matrix m = oracle::random_matrix(5, 5, 1);
  for (double x : m.data()) CHECK(*parse_double(format_double(x)) == x);
}

TEST_CASE("MATF layout and round trip") {
  const Matrix m{{1, 2, 3}, {4, 5, 6}};
  const std::string bytes = encode_matf(m);
  CHECK(bytes.size() == 8 + 8 + 6 * 8);
  CHECK(bytes.substr(0, 8) == "ORTHMAT1");
  CHECK(static_cast<unsigned char>(bytes[8]) == 2);
  CHECK(static_cast<unsigned char>(bytes[12]) == 3);
  CHECK(decode_matf(bytes) == m);

  const Matrix r = oracle::random_matrix(7, 3, 4);
  CHECK(decode_matf(encode_matf(r)) == r);
  CHECK_THROWS_AS(decode_matf("NOTAMATF........"), FormatError);
  CHECK_THROWS_AS(decode_matf(bytes.substr(0, bytes.size() - 1)), FormatError);
}

TEST_CASE("matrix CSV") {
  const Matrix r = oracle::random_matrix(4, 3, 8);
  CHECK(decode_matrix_csv(encode_matrix_csv(r)) == r);
  try {
    decode_matrix_csv("1,2\n3,abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
    CHECK(e.column() == 2);
  }
  CHECK_THROWS_AS(decode_matrix_csv("1,2\n3\n"), ParseError);
}

TEST_CASE("read_matrix sniffs the format") {
  const auto dir = std::filesystem::temp_directory_path();
  const Matrix r = oracle::random_matrix(3, 3, 2);
  write_matf(dir / "orthoreg_t.matf", r);
  write_matrix_csv(dir / "orthoreg_t.csv", r);
  CHECK(read_matrix(dir / "orthoreg_t.matf") == r);
  CHECK(read_matrix(dir / "orthoreg_t.csv") == r);
  std::filesystem::remove(dir / "orthoreg_t.matf");
  std::filesystem::remove(dir / "orthoreg_t.csv");
  CHECK_THROWS_AS(read_matrix(dir / "orthoreg_missing.matf"), FormatError);
}
