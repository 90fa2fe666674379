#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "orthoreg/matrix.hpp"

namespace orthoreg {

/// Penalty value (coefficient already applied) and its gradient w.r.t. W.
struct RegOutput {
  double value = 0.0;
  Matrix grad;
};

enum class RegKind { None, SO, DSO, SelectiveSO, MC, SRIP, SR };

inline constexpr RegKind kAllRegKinds[] = {RegKind::None, RegKind::SO,   RegKind::DSO,
                                           RegKind::SelectiveSO, RegKind::MC, RegKind::SRIP,
                                           RegKind::SR};

std::string_view to_string(RegKind kind);
/// Accepts the lower-case names produced by to_string. Throws std::invalid_argument.
RegKind parse_reg_kind(std::string_view name);

/// How the spectral norm of W^T W - I is obtained.
enum class SpectralMode { Exact, Power };

std::string_view to_string(SpectralMode mode);
SpectralMode parse_spectral_mode(std::string_view name);

struct RegOptions {
  SpectralMode mode = SpectralMode::Power;
  int iters = 2;
  std::uint64_t seed = 0;
  /// MC: take the max over off-diagonal entries only.
  bool mc_offdiag_only = false;
};

/// lambda * ||W^T W - I||_F^2, gradient 4 lambda W (W^T W - I).
RegOutput so(const Matrix& w, double lambda);

/// lambda * (||W^T W - I||_F^2 + ||W W^T - I||_F^2).
RegOutput dso(const Matrix& w, double lambda);

/// Column-Gram penalty when rows > cols, row-Gram penalty otherwise.
RegOutput selective_so(const Matrix& w, double lambda);

/// lambda * max_ij |(W^T W - I)_ij|. The subgradient follows the first
/// maximizing entry in row-major order.
RegOutput mc(const Matrix& w, double lambda, bool offdiag_only = false);

/// lambda * sigma(W^T W - I), exact (Jacobi) or by power iteration.
RegOutput srip(const Matrix& w, double lambda, SpectralMode mode = SpectralMode::Power,
               int iters = 2, std::uint64_t seed = 0);

/// (lambda_s / 2) * sigma(W)^2.
RegOutput sr(const Matrix& w, double lambda_s);

RegOutput evaluate(RegKind kind, const Matrix& w, double lambda, const RegOptions& opts = {});

/// Distance between the active (sub)gradient selector and its runner-up:
/// MC argmax entry vs. the next distinct Gram entry, SRIP top |eigenvalue|
/// vs. the next, SR top eigenvalue vs. the next. Infinite for smooth kinds.
/// Finite-difference checks skip inputs where this is tiny.
double selector_gap(RegKind kind, const Matrix& w, const RegOptions& opts = {});

}  // namespace orthoreg
