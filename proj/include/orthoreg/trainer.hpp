#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orthoreg/data.hpp"
#include "orthoreg/errors.hpp"
#include "orthoreg/matrix.hpp"
#include "orthoreg/regularizers.hpp"
#include "orthoreg/schedule.hpp"

namespace orthoreg {

enum class LayerType { Dense, Conv2D, ReLU, SoftmaxXent };

struct LayerSpec {
  LayerType type = LayerType::ReLU;
  // Dense
  std::size_t in = 0;
  std::size_t out = 0;
  // Conv2D: kernel width x height, channels, stride, zero padding
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;

  static LayerSpec dense(std::size_t in, std::size_t out);
  static LayerSpec conv2d(std::size_t width, std::size_t height, std::size_t in_channels,
                          std::size_t out_channels, std::size_t stride = 1, std::size_t padding = 0);
  static LayerSpec relu();
  static LayerSpec softmax_xent();

  bool has_weights() const noexcept { return type == LayerType::Dense || type == LayerType::Conv2D; }
};

enum class InitKind { Orthogonal, Gaussian };

struct InitSpec {
  InitKind kind = InitKind::Gaussian;
  /// Gaussian standard deviation; 0 selects He scaling sqrt(2 / fan_in).
  double stddev = 0.0;
};

struct TrainConfig {
  std::vector<LayerSpec> layers;
  InitSpec init;
  /// Spatial size of each input example; features are laid out (y, x, channel)
  /// with the channel fastest. Dense-only models use the 1x1 default.
  std::size_t input_height = 1;
  std::size_t input_width = 1;

  RegKind reg_kind = RegKind::SRIP;
  RegOptions reg_options;  // mode/iters for SRIP; seed is derived per step
  bool regularize_classifier = true;
  ScheduleConfig schedule;

  double learning_rate = 0.05;
  std::vector<Breakpoint> lr_breakpoints;
  double momentum = 0.9;
  int epochs = 150;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  int threads = 1;

  /// Throws ConfigError naming the offending setting.
  void validate() const;
};

/// (rows, cols) of each activation is (examples, height * width * channels).
struct Shape3 {
  std::size_t height = 1, width = 1, channels = 1;
  std::size_t size() const noexcept { return height * width * channels; }
};

struct Layer {
  LayerSpec spec;
  Shape3 in_shape;
  Shape3 out_shape;
  /// Dense: in x out. Conv2D: the reshaped (width*height*in_channels) x
  /// out_channels kernel, i.e. reshape_conv of the 4-D tensor.
  Matrix weight;
  Matrix bias;  // 1 x out (or 1 x out_channels)
};

struct Model {
  std::vector<Layer> layers;
  int num_classes = 0;

  /// Indices of layers that carry a weight matrix.
  std::vector<std::size_t> weight_layers() const;
};

/// Builds and initializes the model for `input_dims` features. Throws
/// ShapeMismatch if consecutive layers are incompatible.
Model build_model(const TrainConfig& cfg, std::size_t input_dims, int num_classes,
                  std::uint64_t seed);

/// W with orthonormal columns (rows >= cols) or orthonormal rows, by modified
/// Gram-Schmidt on a seeded Gaussian matrix.
Matrix init_orthogonal(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Coefficients and options of the penalty terms for one step.
struct PenaltyContext {
  RegKind kind = RegKind::None;
  double lambda = 0.0;
  double weight_decay = 0.0;
  RegOptions options;
  bool regularize_classifier = true;
  int threads = 1;
};

struct ForwardCache {
  std::vector<Matrix> inputs;   // input to each layer
  std::vector<Matrix> patches;  // im2col matrices of conv layers
  Matrix probs;
  std::vector<int> labels;
  std::vector<RegOutput> reg;   // per layer; empty grad for unregularized layers
  double data_loss = 0.0;
  double penalty = 0.0;
  std::size_t correct = 0;
};

struct ForwardResult {
  double loss = 0.0;  // data_loss + weight decay + regularizer values
  ForwardCache cache;
};

/// Mean softmax cross-entropy plus lambda2 * sum ||W||_F^2 plus the
/// regularizer values of every regularized weight layer (biases excluded).
ForwardResult forward(const Model& model, const Matrix& batch, const std::vector<int>& labels,
                      const PenaltyContext& ctx);

struct Gradients {
  std::vector<Matrix> weight;  // empty for parameter-free layers
  std::vector<Matrix> bias;
};

Gradients backward(const Model& model, const ForwardCache& cache, const PenaltyContext& ctx);

/// Layers that receive the orthogonality penalty under `ctx`.
bool is_regularized(const Model& model, std::size_t layer, const PenaltyContext& ctx);

struct LayerStats {
  double sigma = 0.0;        // exact sigma(W^T W - I)
  double power_sigma = 0.0;  // power-iteration estimate with the training settings
  double coherence = 0.0;    // NaN when a column vanishes
  double col_norm_mean = 0.0;
  double col_norm_spread = 0.0;  // max - min column norm
};

struct EpochRecord {
  int epoch = 0;
  double lambda = 0.0;
  double weight_decay = 0.0;
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  std::vector<LayerStats> layers;
  double mean_sigma = 0.0;
  double wall_seconds = 0.0;
};

struct TrainRecord {
  std::vector<EpochRecord> epochs;
};

struct TrainResult {
  TrainRecord record;
  Model model;
};

class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss(const std::string& what, TrainRecord partial)
      : Error(what), partial_(std::move(partial)) {}
  const TrainRecord& partial_record() const noexcept { return partial_; }

 private:
  TrainRecord partial_;
};

LayerStats layer_stats(const Matrix& w, const RegOptions& opts, std::uint64_t seed);

double accuracy(const Model& model, const Dataset& ds);

/// Mini-batch SGD with classical momentum; lambda and lambda2 refreshed from
/// the schedule at each epoch boundary. Deterministic for a fixed seed.
TrainResult train(const TrainConfig& cfg, const Dataset& train_set, const Dataset& val_set);

/// Fixed column order: epoch, lambda, weight_decay, learning_rate,
/// train_loss, train_acc, val_acc, mean_sigma, then per weight layer i:
/// sigma_i, power_sigma_i, coherence_i, colnorm_mean_i, colnorm_spread_i.
std::string record_csv(const TrainRecord& record);
/// epoch, wall_seconds. Kept apart from record_csv, which is deterministic.
std::string timing_csv(const TrainRecord& record);

}  // namespace orthoreg
