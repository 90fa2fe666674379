#include "orthoreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "orthoreg/errors.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

Matrix gram(const Matrix& w) {
  const std::size_t n = w.cols();
  Matrix g(n, n);
  for (std::size_t k = 0; k < w.rows(); ++k) {
    const auto row = w.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = row[i];
      if (wi == 0.0) continue;
      for (std::size_t j = i; j < n; ++j) g(i, j) += wi * row[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Matrix gram_rows(const Matrix& w) {
  const std::size_t m = w.rows();
  Matrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) g(i, j) = dot(w.row(i), w.row(j));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Matrix minus_identity(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("minus_identity: matrix not square");
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= 1.0;
  return a;
}

// Kernel storage order (s, h, c, m) with m fastest is exactly the row-major
// layout of the (S*H*C) x M matrix, so both directions are a relabeling.
Matrix reshape_conv(const ConvTensor& c) {
  const auto d = c.data();
  return Matrix(c.width() * c.height() * c.in_channels(), c.out_channels(),
                std::vector<double>(d.begin(), d.end()));
}

ConvTensor unreshape_conv(const Matrix& w, std::size_t width, std::size_t height,
                          std::size_t in_channels) {
  if (w.rows() != width * height * in_channels) {
    throw std::invalid_argument("unreshape_conv: row count does not match kernel geometry");
  }
  const auto d = w.data();
  return ConvTensor(width, height, in_channels, w.cols(), std::vector<double>(d.begin(), d.end()));
}

double frob_norm_sq(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return s;
}

namespace {

void check_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw NotSymmetric("matrix is not square");
  double scale = 1.0;
  for (double x : a.data()) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol * scale) {
        throw NotSymmetric("matrix is not symmetric at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      }
    }
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Applies the rotation that zeroes a(p, q): A <- J^T A J, V <- V J.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SymEigen sym_eig(const Matrix& input, const JacobiOptions& opts) {
  check_symmetric(input, opts.symmetry_tolerance);
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double target = opts.tolerance * std::max(1.0, std::sqrt(frob_norm_sq(input)));

  bool converged = false;
  for (int sweep = 0; sweep <= opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    if (sweep == opts.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, v, p, q);
  }
  if (!converged) {
    throw NoConvergence("Jacobi eigensolver did not converge in " +
                        std::to_string(opts.max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

EigPair sym_eig_dominant(const Matrix& a, const JacobiOptions& opts) {
  const SymEigen eig = sym_eig(a, opts);
  std::size_t best = 0;
  for (std::size_t k = 1; k < eig.values.size(); ++k) {
    if (std::abs(eig.values[k]) > std::abs(eig.values[best])) best = k;
  }
  std::vector<double> vec = eig.vectors.col(best);
  std::size_t pivot = 0;
  for (std::size_t r = 1; r < vec.size(); ++r)
    if (std::abs(vec[r]) > std::abs(vec[pivot])) pivot = r;
  if (vec[pivot] < 0.0)
    for (double& x : vec) x = -x;
  return {eig.values[best], Matrix::column(std::move(vec))};
}

PowerIterResult power_iterate(const LinearOp& apply, std::size_t n, int iters,
                              std::uint64_t seed, const std::optional<Matrix>& warm_start) {
  if (iters < 1) throw std::invalid_argument("power iteration needs iters >= 1");
  std::vector<double> v(n);
  if (warm_start) {
    if (warm_start->size() != n) throw std::invalid_argument("warm start has wrong length");
    const auto d = warm_start->data();
    v.assign(d.begin(), d.end());
  } else {
    Rng rng(seed);
    for (double& x : v) x = rng.normal();
  }

  constexpr double kUnderflow = 1e-300;
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    // The estimate ||A^2 v|| / ||A v|| is invariant to the scale of v, so v is
    // renormalized each round to keep the iterates in range.
    const double nv = norm2(v);
    if (!(nv > kUnderflow)) throw ZeroIterate("power iterate vanished");
    for (double& x : v) x /= nv;
    const std::vector<double> u = apply(v);
    const double nu = norm2(u);
    if (!(nu > kUnderflow)) throw ZeroIterate("power iterate vanished: ||u|| underflow");
    v = apply(u);
    sigma = norm2(v) / nu;
  }
  const double nv = norm2(v);
  if (nv > kUnderflow)
    for (double& x : v) x /= nv;
  return {sigma, Matrix(n, 1, std::move(v))};
}

PowerIterResult power_iterate(const Matrix& a, int iters, std::uint64_t seed,
                              const std::optional<Matrix>& warm_start) {
  if (a.rows() != a.cols()) throw std::invalid_argument("power iteration needs a square matrix");
  const std::size_t n = a.rows();
  auto apply = [&a, n](const std::vector<double>& x) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = dot(a.row(i), x);
    return y;
  };
  return power_iterate(apply, n, iters, seed, warm_start);
}

double power_iter_sigma(const Matrix& a, int iters, std::uint64_t seed) {
  return power_iterate(a, iters, seed).sigma;
}

PowerIterResult power_iterate_gram_shift(const Matrix& w, int iters, std::uint64_t seed,
                                         const std::optional<Matrix>& warm_start) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  auto apply = [&w, m, n](const std::vector<double>& x) {
    std::vector<double> wx(m);
    for (std::size_t i = 0; i < m; ++i) wx[i] = dot(w.row(i), x);
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = w.row(i);
      for (std::size_t j = 0; j < n; ++j) y[j] += row[j] * wx[i];
    }
    for (std::size_t j = 0; j < n; ++j) y[j] -= x[j];
    return y;
  };
  return power_iterate(apply, n, iters, seed, warm_start);
}

std::vector<double> singular_values(const Matrix& w) {
  const SymEigen eig = sym_eig(gram(w));
  std::vector<double> out;
  out.reserve(eig.values.size());
  for (double lambda : eig.values) out.push_back(std::sqrt(std::max(0.0, lambda)));
  return out;
}

}  // namespace orthoreg
