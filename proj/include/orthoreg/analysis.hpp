#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "orthoreg/matrix.hpp"

namespace orthoreg {

/// max_{i != j} |<w_i, w_j>| / (||w_i|| ||w_j||). Needs at least two
/// columns; throws ZeroColumn for a (near-)zero column.
double mutual_coherence(const Matrix& w);

struct RipOptions {
  /// Cap on the number of column subsets examined.
  std::uint64_t max_subsets = 1'000'000;
  int threads = 1;
};

/// Number of column subsets with 1 <= |S| <= k out of n (saturating).
std::uint64_t subset_count(std::size_t n, std::size_t k);

/// Restricted isometry constant over all column subsets of size <= k:
/// max_S sigma(W_S^T W_S - I), by exhaustive enumeration with an exact
/// eigensolver. Cardinalities are processed in increasing order; when the
/// cap would be exceeded, throws BudgetExceeded carrying the exact value for
/// the largest cardinality that fit.
double rip_constant(const Matrix& w, std::size_t k, const RipOptions& opts = {});

struct OrthoReport {
  double mutual_coherence = 0.0;
  double srip_sigma = 0.0;  // sigma(W^T W - I), exact
  std::vector<double> singular_values;
  double col_norm_min = 0.0;
  double col_norm_max = 0.0;
  double col_norm_mean = 0.0;
  std::map<int, double> rip_constants;
  /// k values whose RIP constant is a partial lower bound (budget hit).
  std::set<int> partial_ks;

  bool partial() const noexcept { return !partial_ks.empty(); }
};

/// Aggregates all diagnostics. A budget overrun for some k is recorded in
/// partial_ks instead of aborting; every other error propagates.
OrthoReport report(const Matrix& w, std::span<const int> ks, const RipOptions& opts = {});

/// "name,value" rows.
std::string report_csv(const OrthoReport& r);
/// "name: value" lines.
std::string report_text(const OrthoReport& r);

}  // namespace orthoreg
