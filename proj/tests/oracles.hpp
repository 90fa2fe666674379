#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// they are used to check (no gram(), no Jacobi, no regularizer internals).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "orthoreg/matrix.hpp"
#include "orthoreg/rng.hpp"

namespace oracle {

using orthoreg::Matrix;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                            double scale = 1.0) {
  orthoreg::Rng rng(seed);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = scale * rng.normal();
  return m;
}

/// Gaussian entries scaled so columns have roughly unit norm.
inline Matrix random_weight(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return random_matrix(rows, cols, seed, 1.0 / std::sqrt(static_cast<double>(rows)));
}

/// Product of n random Householder reflections: orthogonal by construction.
inline Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  orthoreg::Rng rng(seed);
  Matrix q = Matrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> v(n);
    double vv = 0.0;
    for (double& x : v) {
      x = rng.normal();
      vv += x * x;
    }
    // q <- q (I - 2 v v^T / v^T v)
    for (std::size_t r = 0; r < n; ++r) {
      double qv = 0.0;
      for (std::size_t c = 0; c < n; ++c) qv += q(r, c) * v[c];
      for (std::size_t c = 0; c < n; ++c) q(r, c) -= 2.0 * qv * v[c] / vv;
    }
  }
  return q;
}

/// Q diag(values) Q^T: symmetric with a known spectrum.
inline Matrix symmetric_with_spectrum(const std::vector<double>& values, std::uint64_t seed) {
  const std::size_t n = values.size();
  const Matrix q = random_orthogonal(n, seed);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q(i, k) * values[k] * q(j, k);
      a(i, j) = s;
    }
  // Exact symmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  return a;
}

/// <w_i, w_j> column by column.
inline double column_dot(const Matrix& w, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t r = 0; r < w.rows(); ++r) s += w(r, i) * w(r, j);
  return s;
}

/// Central differences of f at w with step h.
inline Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& w,
                          double h = 1e-6) {
  Matrix g(w.rows(), w.cols());
  for (std::size_t k = 0; k < w.size(); ++k) {
    Matrix plus = w, minus = w;
    plus.data()[k] += h;
    minus.data()[k] -= h;
    g.data()[k] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

/// ||a - b||_2 / max(||a||_2, ||b||_2, floor).
inline double rel_error(const Matrix& a, const Matrix& b, double floor = 1e-10) {
  double d = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d += (a.data()[k] - b.data()[k]) * (a.data()[k] - b.data()[k]);
    na += a.data()[k] * a.data()[k];
    nb += b.data()[k] * b.data()[k];
  }
  return std::sqrt(d) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

/// sup over `samples` random k-sparse z of | ||Wz||^2 / ||z||^2 - 1 |.
inline double sampled_rip(const Matrix& w, std::size_t k, std::size_t samples, std::uint64_t seed) {
  orthoreg::Rng rng(seed);
  const std::size_t n = w.cols();
  std::vector<std::size_t> idx(n);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    // partial Fisher-Yates for the support
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
    std::vector<double> z(k);
    double zz = 0.0;
    for (double& x : z) {
      x = rng.normal();
      zz += x * x;
    }
    double wz_sq = 0.0;
    for (std::size_t r = 0; r < w.rows(); ++r) {
      double t = 0.0;
      for (std::size_t i = 0; i < k; ++i) t += w(r, idx[i]) * z[i];
      wz_sq += t * t;
    }
    best = std::max(best, std::abs(wz_sq / zz - 1.0));
  }
  return best;
}

}  // namespace oracle
