#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "orthoreg/matrix.hpp"

namespace orthoreg {

/// Labeled examples, one per feature row; labels lie in [0, num_classes).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dims() const noexcept { return features.cols(); }
  /// Throws std::invalid_argument if the invariants do not hold.
  void validate() const;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Isotropic Gaussian clusters (per-coordinate std `spread`) around centers
/// drawn uniformly from [-2, 2]^dims, rejection-sampled so that all centers
/// are at least 4 * spread apart. Examples are emitted class by class.
Dataset gen_blobs(std::uint64_t seed, std::size_t n_per_class, int classes, std::size_t dims,
                  double spread);

/// The centers gen_blobs uses for the same arguments.
Matrix blob_centers(std::uint64_t seed, int classes, std::size_t dims, double spread);

struct CsvDatasetOptions {
  std::size_t label_column = 0;  // 0-based field index
  bool has_header = false;
};

/// Errors: ParseError (1-based line and field), LabelRange.
Dataset load_csv(const std::filesystem::path& path, const CsvDatasetOptions& opts = {});
Dataset parse_dataset_csv(std::string_view text, const CsvDatasetOptions& opts = {});

/// Writes features with the label in column `label_column`.
std::string dataset_to_csv(const Dataset& ds, std::size_t label_column = 0);
void save_csv(const std::filesystem::path& path, const Dataset& ds, std::size_t label_column = 0);

/// Rows of `ds` at `indices`, in that order.
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
};

/// Stratified seeded split. The total validation size is round(N * f); it is
/// apportioned to classes by largest remainder so every class is within one
/// example of proportional. Indices are returned in ascending order.
SplitIndices split_indices(const Dataset& ds, double val_fraction, std::uint64_t seed);

std::pair<Dataset, Dataset> split(const Dataset& ds, double val_fraction, std::uint64_t seed);

}  // namespace orthoreg
