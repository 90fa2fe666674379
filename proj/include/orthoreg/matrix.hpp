#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace orthoreg {

/// Dense row-major matrix of doubles.
///
/// A default-constructed Matrix is empty (0x0); every other constructor
/// requires positive dimensions and finite entries. Column vectors are
/// represented as n x 1 matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> col(std::size_t c) const;
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

/// a * b
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T * b without forming the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a * b^T without forming the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

/// Convolution kernel with shape (width, height, in_channels, out_channels),
/// stored with the output channel varying fastest.
class ConvTensor {
 public:
  ConvTensor() = default;
  ConvTensor(std::size_t width, std::size_t height, std::size_t in_channels,
             std::size_t out_channels);
  ConvTensor(std::size_t width, std::size_t height, std::size_t in_channels,
             std::size_t out_channels, std::vector<double> data);

  std::size_t width() const noexcept { return s_; }
  std::size_t height() const noexcept { return h_; }
  std::size_t in_channels() const noexcept { return c_; }
  std::size_t out_channels() const noexcept { return m_; }

  std::size_t index(std::size_t s, std::size_t h, std::size_t c, std::size_t m) const noexcept {
    return ((s * h_ + h) * c_ + c) * m_ + m;
  }
  double operator()(std::size_t s, std::size_t h, std::size_t c, std::size_t m) const {
    return data_[index(s, h, c, m)];
  }
  double& operator()(std::size_t s, std::size_t h, std::size_t c, std::size_t m) {
    return data_[index(s, h, c, m)];
  }

  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t s_ = 0, h_ = 0, c_ = 0, m_ = 0;
  std::vector<double> data_;
};

}  // namespace orthoreg
