#include "orthoreg/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthoreg/errors.hpp"
#include "orthoreg/linalg.hpp"

namespace orthoreg {

namespace {

void require_nonnegative(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("regularization coefficient must be >= 0");
}

// Gradient 2 * scale * (W v) v^T of scale * v^T W^T W v.
Matrix rank_one_grad(const Matrix& w, const Matrix& v, double scale) {
  const auto vd = v.data();
  Matrix g(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double wv = dot(w.row(i), vd);
    for (std::size_t j = 0; j < w.cols(); ++j) g(i, j) = 2.0 * scale * wv * vd[j];
  }
  return g;
}

RegOutput column_gram_penalty(const Matrix& w, double lambda) {
  const Matrix residual = minus_identity(gram(w));
  return {lambda * frob_norm_sq(residual), 4.0 * lambda * matmul(w, residual)};
}

RegOutput row_gram_penalty(const Matrix& w, double lambda) {
  const Matrix residual = minus_identity(gram_rows(w));
  return {lambda * frob_norm_sq(residual), 4.0 * lambda * matmul(residual, w)};
}

}  // namespace

std::string_view to_string(RegKind kind) {
  switch (kind) {
    case RegKind::None: return "none";
    case RegKind::SO: return "so";
    case RegKind::DSO: return "dso";
    case RegKind::SelectiveSO: return "selective_so";
    case RegKind::MC: return "mc";
    case RegKind::SRIP: return "srip";
    case RegKind::SR: return "sr";
  }
  return "unknown";
}

RegKind parse_reg_kind(std::string_view name) {
  for (RegKind k : kAllRegKinds)
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown regularizer '" + std::string(name) + "'");
}

std::string_view to_string(SpectralMode mode) {
  return mode == SpectralMode::Exact ? "exact" : "power";
}

SpectralMode parse_spectral_mode(std::string_view name) {
  if (name == "exact") return SpectralMode::Exact;
  if (name == "power") return SpectralMode::Power;
  throw std::invalid_argument("unknown spectral mode '" + std::string(name) + "'");
}

RegOutput so(const Matrix& w, double lambda) {
  require_nonnegative(lambda);
  return column_gram_penalty(w, lambda);
}

RegOutput dso(const Matrix& w, double lambda) {
  require_nonnegative(lambda);
  RegOutput cols = column_gram_penalty(w, lambda);
  RegOutput rows = row_gram_penalty(w, lambda);
  cols.value += rows.value;
  cols.grad += rows.grad;
  return cols;
}

RegOutput selective_so(const Matrix& w, double lambda) {
  require_nonnegative(lambda);
  return w.rows() > w.cols() ? column_gram_penalty(w, lambda) : row_gram_penalty(w, lambda);
}

RegOutput mc(const Matrix& w, double lambda, bool offdiag_only) {
  require_nonnegative(lambda);
  const std::size_t n = w.cols();
  const Matrix residual = minus_identity(gram(w));
  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (offdiag_only && i == j) continue;
      if (std::abs(residual(i, j)) > best) {
        best = std::abs(residual(i, j));
        bi = i;
        bj = j;
      }
    }
  }
  Matrix grad(w.rows(), n);
  if (best < 0.0) return {0.0, grad};  // single column with off-diagonal masking

  const double sign = residual(bi, bj) > 0.0 ? 1.0 : (residual(bi, bj) < 0.0 ? -1.0 : 0.0);
  // d G_ij / dW: column j gains w_i and column i gains w_j (twice w_i when i == j).
  for (std::size_t r = 0; r < w.rows(); ++r) {
    grad(r, bj) += lambda * sign * w(r, bi);
    grad(r, bi) += lambda * sign * w(r, bj);
  }
  return {lambda * best, grad};
}

RegOutput srip(const Matrix& w, double lambda, SpectralMode mode, int iters, std::uint64_t seed) {
  require_nonnegative(lambda);
  if (mode == SpectralMode::Exact) {
    const EigPair dom = sym_eig_dominant(minus_identity(gram(w)));
    // At sigma = 0 the zero matrix is a valid subgradient.
    if (dom.value == 0.0) return {0.0, Matrix(w.rows(), w.cols())};
    const double sign = dom.value >= 0.0 ? 1.0 : -1.0;
    return {lambda * std::abs(dom.value), rank_one_grad(w, dom.vector, lambda * sign)};
  }
  PowerIterResult est;
  try {
    est = power_iterate_gram_shift(w, iters, seed);
  } catch (const ZeroIterate&) {
    return {0.0, Matrix(w.rows(), w.cols())};
  }
  // Sign of the Rayleigh quotient v^T (W^T W - I) v = ||W v||^2 - 1 stands in
  // for the sign of the dominant eigenvalue.
  const auto v = est.direction.data();
  double wv_sq = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double t = dot(w.row(i), v);
    wv_sq += t * t;
  }
  const double sign = wv_sq - 1.0 >= 0.0 ? 1.0 : -1.0;
  return {lambda * est.sigma, rank_one_grad(w, est.direction, lambda * sign)};
}

RegOutput sr(const Matrix& w, double lambda_s) {
  require_nonnegative(lambda_s);
  const SymEigen eig = sym_eig(gram(w));
  const Matrix top = Matrix::column(eig.vectors.col(0));
  return {0.5 * lambda_s * eig.values[0], rank_one_grad(w, top, 0.5 * lambda_s)};
}

RegOutput evaluate(RegKind kind, const Matrix& w, double lambda, const RegOptions& opts) {
  switch (kind) {
    case RegKind::None:
      require_nonnegative(lambda);
      return {0.0, Matrix(w.rows(), w.cols())};
    case RegKind::SO: return so(w, lambda);
    case RegKind::DSO: return dso(w, lambda);
    case RegKind::SelectiveSO: return selective_so(w, lambda);
    case RegKind::MC: return mc(w, lambda, opts.mc_offdiag_only);
    case RegKind::SRIP: return srip(w, lambda, opts.mode, opts.iters, opts.seed);
    case RegKind::SR: return sr(w, lambda);
  }
  throw std::invalid_argument("unknown regularizer kind");
}

double selector_gap(RegKind kind, const Matrix& w, const RegOptions& opts) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto top_two_gap = [](std::vector<double> v) {
    if (v.size() < 2) return kInf;
    std::partial_sort(v.begin(), v.begin() + 2, v.end(), std::greater<>());
    return v[0] - v[1];
  };
  switch (kind) {
    case RegKind::MC: {
      const Matrix residual = minus_identity(gram(w));
      std::vector<double> candidates;
      for (std::size_t i = 0; i < w.cols(); ++i)
        for (std::size_t j = i; j < w.cols(); ++j)
          if (!(opts.mc_offdiag_only && i == j)) candidates.push_back(std::abs(residual(i, j)));
      return top_two_gap(std::move(candidates));
    }
    case RegKind::SRIP: {
      std::vector<double> mags = sym_eig(minus_identity(gram(w))).values;
      for (double& x : mags) x = std::abs(x);
      return top_two_gap(std::move(mags));
    }
    case RegKind::SR: return top_two_gap(sym_eig(gram(w)).values);
    default: return kInf;
  }
}

}  // namespace orthoreg
