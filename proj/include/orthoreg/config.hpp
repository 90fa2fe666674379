#pragma once

#include <filesystem>
#include <string>

#include "orthoreg/data.hpp"
#include "orthoreg/trainer.hpp"

namespace orthoreg {

/// Where the training data comes from.
struct DataConfig {
  enum class Source { Blobs, Csv } source = Source::Blobs;
  std::uint64_t blobs_seed = 1;
  std::size_t n_per_class = 200;
  int classes = 3;
  std::size_t dims = 16;
  double spread = 1.2;
  std::filesystem::path csv_path;
  CsvDatasetOptions csv;
  double val_fraction = 0.25;
  std::uint64_t split_seed = 1;
};

/// Everything a `train` run needs.
struct ExperimentConfig {
  TrainConfig train;
  DataConfig data;
};

/// Parses the INI-style experiment config:
///
///   [model]      layers, init, input_shape
///   [regularizer] kind, srip_mode, power_iters, regularize_classifier, mc_offdiag_only
///   [schedule]   lambda_init, lambda_breakpoints, wd_init, wd_breakpoints_<kind>
///   [optimizer]  learning_rate, lr_breakpoints, momentum
///   [train]      epochs, batch_size, seed, threads
///   [data]       source, blobs_seed, n_per_class, classes, dims, spread,
///                csv_path, label_column, csv_header, val_fraction, split_seed
///
/// Unknown sections or keys raise ConfigError naming the key.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical config text for `cfg` (parses back to the same settings).
std::string dump_experiment_config(const ExperimentConfig& cfg);

/// "dense:16:32, relu, conv:3:3:1:4:1:1, softmax_xent"
std::vector<LayerSpec> parse_layers(std::string_view text);
std::string format_layers(const std::vector<LayerSpec>& layers);

/// Materializes the dataset described by `cfg` and splits it.
std::pair<Dataset, Dataset> load_experiment_data(const DataConfig& cfg);

}  // namespace orthoreg
