#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "orthoreg/matrix.hpp"

namespace orthoreg {

/// W^T W. The upper triangle is computed and mirrored, so the result is
/// exactly symmetric.
Matrix gram(const Matrix& w);

/// W W^T, exactly symmetric.
Matrix gram_rows(const Matrix& w);

/// a - I for square a.
Matrix minus_identity(Matrix a);

/// Flattens a (S, H, C, M) kernel into an (S*H*C) x M matrix whose columns
/// are the individual filters.
Matrix reshape_conv(const ConvTensor& c);

/// Inverse of reshape_conv for the given kernel geometry.
ConvTensor unreshape_conv(const Matrix& w, std::size_t width, std::size_t height,
                          std::size_t in_channels);

double frob_norm_sq(const Matrix& a);

struct EigPair {
  double value = 0.0;
  Matrix vector;  // unit-norm column
};

/// Full symmetric eigendecomposition; values descending, vectors as columns.
struct SymEigen {
  std::vector<double> values;
  Matrix vectors;
};

struct JacobiOptions {
  int max_sweeps = 100;
  /// Off-diagonal Frobenius target, scaled by max(1, ||A||_F).
  double tolerance = 1e-12;
  /// Entrywise symmetry tolerance, scaled by max(1, max|a_ij|).
  double symmetry_tolerance = 1e-12;
};

/// Cyclic Jacobi eigensolver. Throws NotSymmetric or NoConvergence.
SymEigen sym_eig(const Matrix& a, const JacobiOptions& opts = {});

/// Eigenpair of maximum |value|. Ties prefer the larger signed value; the
/// vector is signed so its largest-magnitude component is positive.
EigPair sym_eig_dominant(const Matrix& a, const JacobiOptions& opts = {});

/// Result of the two-step power update u <- A v, v <- A u.
struct PowerIterResult {
  double sigma = 0.0;  // ||v|| / ||u|| of the final round
  Matrix direction;    // final v, unit length
};

/// Linear operator x -> A x on vectors of a fixed dimension.
using LinearOp = std::function<std::vector<double>(const std::vector<double>&)>;

/// Runs `iters` rounds of u <- A v, v <- A u starting from a seeded uniform
/// random unit vector, or from `warm_start` when given. Throws ZeroIterate
/// when ||u|| underflows.
PowerIterResult power_iterate(const LinearOp& apply, std::size_t n, int iters,
                              std::uint64_t seed,
                              const std::optional<Matrix>& warm_start = std::nullopt);

PowerIterResult power_iterate(const Matrix& a, int iters, std::uint64_t seed,
                              const std::optional<Matrix>& warm_start = std::nullopt);

/// Spectral estimate of a symmetric matrix after `iters` power rounds.
double power_iter_sigma(const Matrix& a, int iters = 2, std::uint64_t seed = 0);

/// Power iteration on W^T W - I applied as W^T (W x) - x, never forming the
/// n x n Gram matrix.
PowerIterResult power_iterate_gram_shift(const Matrix& w, int iters, std::uint64_t seed,
                                         const std::optional<Matrix>& warm_start = std::nullopt);

/// Descending singular values of w (square roots of gram(w)'s eigenvalues,
/// clamped at zero).
std::vector<double> singular_values(const Matrix& w);

}  // namespace orthoreg
