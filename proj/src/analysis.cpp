#include "orthoreg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "orthoreg/errors.hpp"
#include "orthoreg/format.hpp"
#include "orthoreg/linalg.hpp"

namespace orthoreg {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

// Advances idx to the next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double subset_sigma(const Matrix& residual, const std::vector<std::size_t>& cols) {
  const std::size_t k = cols.size();
  if (k == 1) return std::abs(residual(cols[0], cols[0]));
  Matrix sub(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) sub(a, b) = residual(cols[a], cols[b]);
  return std::abs(sym_eig_dominant(sub).value);
}

// Max of subset_sigma over all size-k subsets; worker t handles the
// combinations whose lexicographic rank is congruent to t.
double max_over_cardinality(const Matrix& residual, std::size_t k, int threads) {
  const std::size_t n = residual.cols();
  threads = std::max(1, threads);
  std::vector<double> partial(static_cast<std::size_t>(threads), 0.0);
  auto work = [&](int t) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::uint64_t rank = 0;
    double best = 0.0;
    do {
      if (rank % static_cast<std::uint64_t>(threads) == static_cast<std::uint64_t>(t))
        best = std::max(best, subset_sigma(residual, idx));
      ++rank;
    } while (next_combination(idx, n));
    partial[static_cast<std::size_t>(t)] = best;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

double mutual_coherence(const Matrix& w) {
  const std::size_t n = w.cols();
  if (n < 2) throw std::invalid_argument("mutual coherence needs at least two columns");
  const Matrix g = gram(w);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = std::sqrt(g(i, i));
    if (norms[i] <= 1e-300) throw ZeroColumn(i);
  }
  double mu = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      mu = std::max(mu, std::abs(g(i, j)) / (norms[i] * norms[j]));
  return std::min(mu, 1.0);
}

std::uint64_t subset_count(std::size_t n, std::size_t k) {
  std::uint64_t total = 0;
  for (std::size_t j = 1; j <= std::min(k, n); ++j) total = saturating_add(total, binomial(n, j));
  return total;
}

double rip_constant(const Matrix& w, std::size_t k, const RipOptions& opts) {
  const std::size_t n = w.cols();
  if (k < 1 || k > n) {
    throw std::invalid_argument("rip_constant: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(n) + "]");
  }
  const Matrix residual = minus_identity(gram(w));
  const std::uint64_t requested = subset_count(n, k);
  std::uint64_t used = 0;
  double delta = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    const std::uint64_t c = binomial(n, j);
    if (saturating_add(used, c) > opts.max_subsets) {
      throw BudgetExceeded(delta, static_cast<int>(j - 1), requested);
    }
    used += c;
    delta = std::max(delta, max_over_cardinality(residual, j, opts.threads));
  }
  return delta;
}

OrthoReport report(const Matrix& w, std::span<const int> ks, const RipOptions& opts) {
  OrthoReport r;
  // A single column has no distinct pair; its coherence is reported as 0.
  r.mutual_coherence = w.cols() >= 2 ? mutual_coherence(w) : 0.0;
  r.srip_sigma = std::abs(sym_eig_dominant(minus_identity(gram(w))).value);
  r.singular_values = singular_values(w);

  const Matrix g = gram(w);
  double sum = 0.0;
  r.col_norm_min = std::numeric_limits<double>::infinity();
  r.col_norm_max = 0.0;
  for (std::size_t i = 0; i < w.cols(); ++i) {
    const double nrm = std::sqrt(g(i, i));
    r.col_norm_min = std::min(r.col_norm_min, nrm);
    r.col_norm_max = std::max(r.col_norm_max, nrm);
    sum += nrm;
  }
  r.col_norm_mean = sum / static_cast<double>(w.cols());

  std::vector<int> sorted(ks.begin(), ks.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int k : sorted) {
    if (k < 1) throw std::invalid_argument("rip k must be positive");
    try {
      r.rip_constants[k] = rip_constant(w, static_cast<std::size_t>(k), opts);
    } catch (const BudgetExceeded& e) {
      r.rip_constants[k] = e.partial_value();
      r.partial_ks.insert(k);
    }
  }
  return r;
}

namespace {

template <typename Emit>
void walk_report(const OrthoReport& r, Emit&& emit) {
  emit("mutual_coherence", format_double(r.mutual_coherence));
  emit("srip_sigma", format_double(r.srip_sigma));
  for (std::size_t i = 0; i < r.singular_values.size(); ++i)
    emit("singular_value_" + std::to_string(i), format_double(r.singular_values[i]));
  emit("col_norm_min", format_double(r.col_norm_min));
  emit("col_norm_max", format_double(r.col_norm_max));
  emit("col_norm_mean", format_double(r.col_norm_mean));
  for (const auto& [k, delta] : r.rip_constants) {
    emit("rip_delta_k" + std::to_string(k), format_double(delta));
    if (r.partial_ks.count(k)) emit("rip_partial_k" + std::to_string(k), "1");
  }
  emit("partial", r.partial() ? "1" : "0");
}

}  // namespace

std::string report_csv(const OrthoReport& r) {
  std::string out = "name,value\n";
  walk_report(r, [&](const std::string& name, const std::string& value) {
    out += name + "," + value + "\n";
  });
  return out;
}

std::string report_text(const OrthoReport& r) {
  std::string out;
  walk_report(r, [&](const std::string& name, const std::string& value) {
    out += name + ": " + value + "\n";
  });
  return out;
}

}  // namespace orthoreg
