#include "orthoreg/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "orthoreg/errors.hpp"
#include "orthoreg/format.hpp"
#include "orthoreg/matrix_io.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(features.rows()) +
                                " feature rows but " + std::to_string(labels.size()) + " labels");
  }
  for (int y : labels)
    if (y < 0 || y >= num_classes) throw std::invalid_argument("label outside [0, num_classes)");
}

namespace {

constexpr int kPlacementAttempts = 1000;
constexpr double kCenterBox = 2.0;  // centers lie in [-kCenterBox, kCenterBox]^dims

void check_blob_args(int classes, std::size_t dims, double spread) {
  if (classes <= 0 || dims == 0) throw std::invalid_argument("gen_blobs: counts must be positive");
  if (!(spread > 0.0)) throw std::invalid_argument("gen_blobs: spread must be positive");
}

}  // namespace

Matrix blob_centers(std::uint64_t seed, int classes, std::size_t dims, double spread) {
  check_blob_args(classes, dims, spread);
  Rng rng(seed);
  const double min_dist = 4.0 * spread;
  Matrix centers(static_cast<std::size_t>(classes), dims);
  for (int c = 0; c < classes; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      for (std::size_t d = 0; d < dims; ++d) centers(c, d) = rng.uniform(-kCenterBox, kCenterBox);
      placed = true;
      for (int other = 0; other < c && placed; ++other) {
        double dist_sq = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
          const double diff = centers(c, d) - centers(other, d);
          dist_sq += diff * diff;
        }
        placed = std::sqrt(dist_sq) >= min_dist;
      }
    }
    if (!placed) {
      throw CenterPlacementFailure("could not place center " + std::to_string(c) + " at distance >= " +
                                   format_double(min_dist) + " after " +
                                   std::to_string(kPlacementAttempts) + " attempts");
    }
  }
  return centers;
}

Dataset gen_blobs(std::uint64_t seed, std::size_t n_per_class, int classes, std::size_t dims,
                  double spread) {
  if (n_per_class == 0) throw std::invalid_argument("gen_blobs: counts must be positive");
  const Matrix centers = blob_centers(seed, classes, dims, spread);
  Rng rng(derive_seed(seed, 0x626c6f62));  // separate stream for the samples
  const std::size_t n = n_per_class * static_cast<std::size_t>(classes);
  Dataset ds{Matrix(n, dims), std::vector<int>(n), classes};
  std::size_t row = 0;
  for (int c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
      for (std::size_t d = 0; d < dims; ++d)
        ds.features(row, d) = centers(c, d) + spread * rng.normal();
      ds.labels[row] = c;
    }
  }
  return ds;
}

Dataset parse_dataset_csv(std::string_view text, const CsvDatasetOptions& opts) {
  std::vector<double> features;
  std::vector<int> labels;
  std::size_t fields_per_row = 0;
  std::size_t line_no = 0;
  bool header_pending = opts.has_header;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (trim(line).empty()) continue;

    std::vector<std::string_view> cells;
    while (true) {
      const auto comma = line.find(',');
      cells.push_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (fields_per_row == 0) {
      fields_per_row = cells.size();
      if (opts.label_column >= fields_per_row) {
        throw ParseError("label column " + std::to_string(opts.label_column + 1) + " missing",
                         line_no, opts.label_column + 1);
      }
      if (fields_per_row < 2) throw ParseError("need at least one feature column", line_no, 1);
    }
    if (cells.size() != fields_per_row) {
      throw ParseError("expected " + std::to_string(fields_per_row) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no, std::min(cells.size(), fields_per_row) + 1);
    }
    for (std::size_t f = 0; f < cells.size(); ++f) {
      const auto v = parse_double(cells[f]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("malformed number '" + std::string(trim(cells[f])) + "'", line_no, f + 1);
      }
      if (f == opts.label_column) {
        if (*v != std::floor(*v) || *v < 0.0 || *v > 1e9) {
          throw ParseError("label '" + std::string(trim(cells[f])) + "' is not a class id", line_no,
                           f + 1);
        }
        labels.push_back(static_cast<int>(*v));
      } else {
        features.push_back(*v);
      }
    }
  }
  if (labels.empty()) throw ParseError("no data rows", line_no, 1);

  const std::set<int> distinct(labels.begin(), labels.end());
  const int num_classes = *distinct.rbegin() + 1;
  if (static_cast<int>(distinct.size()) != num_classes) {
    throw LabelRange("labels must be contiguous from 0; found " + std::to_string(distinct.size()) +
                     " distinct values with maximum " + std::to_string(num_classes - 1));
  }
  const std::size_t n = labels.size();
  return Dataset{Matrix(n, fields_per_row - 1, std::move(features)), std::move(labels), num_classes};
}

Dataset load_csv(const std::filesystem::path& path, const CsvDatasetOptions& opts) {
  return parse_dataset_csv(read_file(path), opts);
}

std::string dataset_to_csv(const Dataset& ds, std::size_t label_column) {
  std::string out;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    std::size_t f = 0;
    for (std::size_t field = 0; field <= ds.dims(); ++field) {
      if (field) out += ',';
      if (field == label_column) {
        out += std::to_string(ds.labels[r]);
      } else {
        out += format_double(ds.features(r, f++));
      }
    }
    out += '\n';
  }
  return out;
}

void save_csv(const std::filesystem::path& path, const Dataset& ds, std::size_t label_column) {
  write_file(path, dataset_to_csv(ds, label_column));
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw std::invalid_argument("empty dataset subset");
  Dataset out{Matrix(indices.size(), ds.dims()), {}, ds.num_classes};
  out.labels.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = ds.features.row(indices[i]);
    std::copy(src.begin(), src.end(), out.features.data().begin() + i * ds.dims());
    out.labels.push_back(ds.labels[indices[i]]);
  }
  return out;
}

SplitIndices split_indices(const Dataset& ds, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("val_fraction must lie in (0, 1)");
  }
  const auto classes = static_cast<std::size_t>(ds.num_classes);
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
  for (std::size_t c = 0; c < classes; ++c) {
    if (by_class[c].size() < 2) {
      throw TooFewExamples("class " + std::to_string(c) + " has " +
                           std::to_string(by_class[c].size()) + " examples; need at least 2");
    }
  }

  const auto total_val = static_cast<std::size_t>(std::llround(ds.size() * val_fraction));
  std::vector<std::size_t> take(classes);
  std::vector<double> remainder(classes);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const double exact = by_class[c].size() * val_fraction;
    take[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - std::floor(exact);
    assigned += take[c];
  }
  std::vector<std::size_t> order(classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total_val && i < classes; ++i) {
    if (take[order[i]] < by_class[order[i]].size()) {
      ++take[order[i]];
      ++assigned;
    }
  }

  Rng rng(seed);
  SplitIndices out;
  for (std::size_t c = 0; c < classes; ++c) {
    rng.shuffle(std::span<std::size_t>(by_class[c]));
    out.val.insert(out.val.end(), by_class[c].begin(), by_class[c].begin() + take[c]);
    out.train.insert(out.train.end(), by_class[c].begin() + take[c], by_class[c].end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double val_fraction, std::uint64_t seed) {
  const SplitIndices idx = split_indices(ds, val_fraction, seed);
  return {subset(ds, idx.train), subset(ds, idx.val)};
}

}  // namespace orthoreg
