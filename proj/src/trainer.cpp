#include "orthoreg/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "orthoreg/analysis.hpp"
#include "orthoreg/format.hpp"
#include "orthoreg/linalg.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

LayerSpec LayerSpec::dense(std::size_t in, std::size_t out) {
  LayerSpec s;
  s.type = LayerType::Dense;
  s.in = in;
  s.out = out;
  return s;
}

LayerSpec LayerSpec::conv2d(std::size_t width, std::size_t height, std::size_t in_channels,
                            std::size_t out_channels, std::size_t stride, std::size_t padding) {
  LayerSpec s;
  s.type = LayerType::Conv2D;
  s.width = width;
  s.height = height;
  s.in_channels = in_channels;
  s.out_channels = out_channels;
  s.stride = stride;
  s.padding = padding;
  return s;
}

LayerSpec LayerSpec::relu() { return LayerSpec{}; }

LayerSpec LayerSpec::softmax_xent() {
  LayerSpec s;
  s.type = LayerType::SoftmaxXent;
  return s;
}

void TrainConfig::validate() const {
  if (layers.empty()) throw ConfigError("layers: model has no layers");
  if (layers.back().type != LayerType::SoftmaxXent) {
    throw ConfigError("layers: last layer must be softmax_xent");
  }
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.type == LayerType::SoftmaxXent) throw ConfigError("layers: softmax_xent must be last");
    if (l.type == LayerType::Dense && (l.in == 0 || l.out == 0)) {
      throw ConfigError("layers: dense layer " + std::to_string(i) + " has a zero dimension");
    }
    if (l.type == LayerType::Conv2D &&
        (l.width == 0 || l.height == 0 || l.in_channels == 0 || l.out_channels == 0 || l.stride == 0)) {
      throw ConfigError("layers: conv layer " + std::to_string(i) + " has a zero dimension");
    }
  }
  if (input_height == 0 || input_width == 0) throw ConfigError("input_shape: must be positive");
  if (epochs < 1) throw ConfigError("epochs: must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size: must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate: must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum: must lie in [0, 1)");
  if (threads < 1) throw ConfigError("threads: must be >= 1");
  if (reg_options.iters < 1) throw ConfigError("power_iters: must be >= 1");
  if (init.stddev < 0.0) throw ConfigError("init: stddev must be >= 0");
  for (std::size_t i = 1; i < lr_breakpoints.size(); ++i) {
    if (lr_breakpoints[i].epoch <= lr_breakpoints[i - 1].epoch) {
      throw ConfigError("lr_breakpoints: epochs must be strictly increasing");
    }
  }
  try {
    schedule.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
}

std::vector<std::size_t> Model::weight_layers() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].spec.has_weights()) out.push_back(i);
  return out;
}

Matrix init_orthogonal(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  const bool tall = rows >= cols;
  // Orthonormalize the columns of a tall Gaussian matrix; wide shapes use
  // the transpose so their rows come out orthonormal.
  const std::size_t m = tall ? rows : cols;
  const std::size_t n = tall ? cols : rows;
  Rng rng(seed);
  Matrix q(m, n);
  for (double& x : q.data()) x = rng.normal();
  for (std::size_t j = 0; j < n; ++j) {
    // Two modified Gram-Schmidt passes keep the result orthonormal to
    // rounding even when the Gaussian draw is ill-conditioned.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double proj = 0.0;
        for (std::size_t r = 0; r < m; ++r) proj += q(r, k) * q(r, j);
        for (std::size_t r = 0; r < m; ++r) q(r, j) -= proj * q(r, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < m; ++r) nrm += q(r, j) * q(r, j);
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < m; ++r) q(r, j) /= nrm;
  }
  return tall ? q : q.transpose();
}

Model build_model(const TrainConfig& cfg, std::size_t input_dims, int num_classes,
                  std::uint64_t seed) {
  cfg.validate();
  const std::size_t spatial = cfg.input_height * cfg.input_width;
  if (input_dims % spatial != 0) {
    throw ShapeMismatch("input dims " + std::to_string(input_dims) + " not divisible by " +
                        std::to_string(cfg.input_height) + "x" + std::to_string(cfg.input_width));
  }
  Model model;
  model.num_classes = num_classes;
  Shape3 shape{cfg.input_height, cfg.input_width, input_dims / spatial};
  Rng init_rng(seed);
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    const LayerSpec& spec = cfg.layers[i];
    Layer layer{spec, shape, shape, {}, {}};
    std::size_t fan_in = 0, fan_out = 0;
    switch (spec.type) {
      case LayerType::Dense:
        if (spec.in != shape.size()) {
          throw ShapeMismatch("layer " + std::to_string(i) + ": dense expects " +
                              std::to_string(spec.in) + " inputs, previous layer gives " +
                              std::to_string(shape.size()));
        }
        layer.out_shape = {1, 1, spec.out};
        fan_in = spec.in;
        fan_out = spec.out;
        break;
      case LayerType::Conv2D: {
        if (spec.in_channels != shape.channels) {
          throw ShapeMismatch("layer " + std::to_string(i) + ": conv expects " +
                              std::to_string(spec.in_channels) + " channels, got " +
                              std::to_string(shape.channels));
        }
        if (shape.height + 2 * spec.padding < spec.height ||
            shape.width + 2 * spec.padding < spec.width) {
          throw ShapeMismatch("layer " + std::to_string(i) + ": kernel larger than padded input");
        }
        layer.out_shape = {(shape.height + 2 * spec.padding - spec.height) / spec.stride + 1,
                           (shape.width + 2 * spec.padding - spec.width) / spec.stride + 1,
                           spec.out_channels};
        fan_in = spec.width * spec.height * spec.in_channels;
        fan_out = spec.out_channels;
        break;
      }
      case LayerType::ReLU:
        break;
      case LayerType::SoftmaxXent:
        if (shape.size() != static_cast<std::size_t>(num_classes)) {
          throw ShapeMismatch("softmax_xent receives " + std::to_string(shape.size()) +
                              " logits for " + std::to_string(num_classes) + " classes");
        }
        break;
    }
    if (spec.has_weights()) {
      const std::uint64_t layer_seed = init_rng.next_u64();
      if (cfg.init.kind == InitKind::Orthogonal) {
        layer.weight = init_orthogonal(fan_in, fan_out, layer_seed);
      } else {
        const double stddev =
            cfg.init.stddev > 0.0 ? cfg.init.stddev : std::sqrt(2.0 / static_cast<double>(fan_in));
        Rng rng(layer_seed);
        layer.weight = Matrix(fan_in, fan_out);
        for (double& x : layer.weight.data()) x = stddev * rng.normal();
      }
      layer.bias = Matrix(1, fan_out);
    }
    shape = layer.out_shape;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

bool is_regularized(const Model& model, std::size_t layer, const PenaltyContext& ctx) {
  if (!model.layers[layer].spec.has_weights()) return false;
  if (ctx.kind == RegKind::None || ctx.lambda == 0.0) return false;
  if (!ctx.regularize_classifier) {
    const auto wl = model.weight_layers();
    if (!wl.empty() && wl.back() == layer) return false;
  }
  return true;
}

namespace {

Matrix im2col(const Matrix& x, const Layer& layer) {
  const auto& s = layer.spec;
  const Shape3 in = layer.in_shape;
  const Shape3 out = layer.out_shape;
  const std::size_t positions = out.height * out.width;
  const std::size_t patch = s.width * s.height * s.in_channels;
  Matrix p(x.rows() * positions, patch);
  for (std::size_t b = 0; b < x.rows(); ++b) {
    const auto src = x.row(b);
    for (std::size_t oy = 0; oy < out.height; ++oy) {
      for (std::size_t ox = 0; ox < out.width; ++ox) {
        const std::size_t prow = b * positions + oy * out.width + ox;
        for (std::size_t kx = 0; kx < s.width; ++kx) {
          for (std::size_t ky = 0; ky < s.height; ++ky) {
            const auto iy = static_cast<std::ptrdiff_t>(oy * s.stride + ky) -
                            static_cast<std::ptrdiff_t>(s.padding);
            const auto ix = static_cast<std::ptrdiff_t>(ox * s.stride + kx) -
                            static_cast<std::ptrdiff_t>(s.padding);
            if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(in.height) ||
                ix >= static_cast<std::ptrdiff_t>(in.width))
              continue;
            const std::size_t base = (static_cast<std::size_t>(iy) * in.width +
                                      static_cast<std::size_t>(ix)) * in.channels;
            const std::size_t col = (kx * s.height + ky) * s.in_channels;
            for (std::size_t c = 0; c < s.in_channels; ++c) p(prow, col + c) = src[base + c];
          }
        }
      }
    }
  }
  return p;
}

Matrix col2im(const Matrix& dp, const Layer& layer, std::size_t batch) {
  const auto& s = layer.spec;
  const Shape3 in = layer.in_shape;
  const Shape3 out = layer.out_shape;
  const std::size_t positions = out.height * out.width;
  Matrix dx(batch, in.size());
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t oy = 0; oy < out.height; ++oy) {
      for (std::size_t ox = 0; ox < out.width; ++ox) {
        const std::size_t prow = b * positions + oy * out.width + ox;
        for (std::size_t kx = 0; kx < s.width; ++kx) {
          for (std::size_t ky = 0; ky < s.height; ++ky) {
            const auto iy = static_cast<std::ptrdiff_t>(oy * s.stride + ky) -
                            static_cast<std::ptrdiff_t>(s.padding);
            const auto ix = static_cast<std::ptrdiff_t>(ox * s.stride + kx) -
                            static_cast<std::ptrdiff_t>(s.padding);
            if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(in.height) ||
                ix >= static_cast<std::ptrdiff_t>(in.width))
              continue;
            const std::size_t base = (static_cast<std::size_t>(iy) * in.width +
                                      static_cast<std::size_t>(ix)) * in.channels;
            const std::size_t col = (kx * s.height + ky) * s.in_channels;
            for (std::size_t c = 0; c < s.in_channels; ++c) dx(b, base + c) += dp(prow, col + c);
          }
        }
      }
    }
  }
  return dx;
}

void add_bias(Matrix& y, const Matrix& bias) {
  for (std::size_t r = 0; r < y.rows(); ++r)
    for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) += bias(0, c);
}

Matrix column_sums(const Matrix& g) {
  Matrix s(1, g.cols());
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) s(0, c) += g(r, c);
  return s;
}

// Same row-major data viewed with a different shape.
Matrix reshaped(Matrix m, std::size_t rows, std::size_t cols) {
  const auto d = m.data();
  return Matrix(rows, cols, std::vector<double>(d.begin(), d.end()));
}

std::vector<RegOutput> regularizer_terms(const Model& model, const PenaltyContext& ctx) {
  std::vector<RegOutput> out(model.layers.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < model.layers.size(); ++i)
    if (is_regularized(model, i, ctx)) todo.push_back(i);

  auto eval = [&](std::size_t i) {
    RegOptions opts = ctx.options;
    opts.seed = derive_seed(ctx.options.seed, i);
    return evaluate(ctx.kind, model.layers[i].weight, ctx.lambda, opts);
  };
  if (ctx.threads > 1 && todo.size() > 1) {
    std::vector<std::future<RegOutput>> futures;
    for (std::size_t i : todo) futures.push_back(std::async(std::launch::async, eval, i));
    for (std::size_t k = 0; k < todo.size(); ++k) out[todo[k]] = futures[k].get();
  } else {
    for (std::size_t i : todo) out[i] = eval(i);
  }
  return out;
}

}  // namespace

ForwardResult forward(const Model& model, const Matrix& batch, const std::vector<int>& labels,
                      const PenaltyContext& ctx) {
  if (model.layers.empty()) throw ShapeMismatch("model has no layers");
  if (batch.cols() != model.layers.front().in_shape.size()) {
    throw ShapeMismatch("batch has " + std::to_string(batch.cols()) + " features, model expects " +
                        std::to_string(model.layers.front().in_shape.size()));
  }
  if (labels.size() != batch.rows()) throw ShapeMismatch("label count differs from batch rows");

  ForwardResult res;
  ForwardCache& cache = res.cache;
  cache.inputs.resize(model.layers.size());
  cache.patches.resize(model.layers.size());
  cache.labels = labels;
  const std::size_t bsz = batch.rows();
  Matrix x = batch;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const Layer& layer = model.layers[i];
    cache.inputs[i] = x;
    switch (layer.spec.type) {
      case LayerType::Dense: {
        x = matmul(x, layer.weight);
        add_bias(x, layer.bias);
        break;
      }
      case LayerType::Conv2D: {
        cache.patches[i] = im2col(x, layer);
        Matrix y = matmul(cache.patches[i], layer.weight);
        add_bias(y, layer.bias);
        x = reshaped(std::move(y), bsz, layer.out_shape.size());
        break;
      }
      case LayerType::ReLU:
        for (double& v : x.data()) v = std::max(v, 0.0);
        break;
      case LayerType::SoftmaxXent: {
        Matrix probs(bsz, x.cols());
        double total = 0.0;
        for (std::size_t r = 0; r < bsz; ++r) {
          const auto row = x.row(r);
          const double mx = *std::max_element(row.begin(), row.end());
          double z = 0.0;
          for (std::size_t c = 0; c < row.size(); ++c) z += std::exp(row[c] - mx);
          for (std::size_t c = 0; c < row.size(); ++c) probs(r, c) = std::exp(row[c] - mx) / z;
          const auto y = static_cast<std::size_t>(labels[r]);
          if (y >= row.size()) throw ShapeMismatch("label outside the softmax range");
          total += std::log(z) - (row[y] - mx);
          const auto pred = static_cast<std::size_t>(
              std::max_element(row.begin(), row.end()) - row.begin());
          if (pred == y) ++cache.correct;
        }
        cache.data_loss = total / static_cast<double>(bsz);
        cache.probs = std::move(probs);
        break;
      }
    }
  }

  cache.reg = regularizer_terms(model, ctx);
  double penalty = 0.0;
  for (std::size_t i : model.weight_layers()) {
    penalty += ctx.weight_decay * frob_norm_sq(model.layers[i].weight);
    penalty += cache.reg[i].value;
  }
  cache.penalty = penalty;
  res.loss = cache.data_loss + penalty;
  return res;
}

Gradients backward(const Model& model, const ForwardCache& cache, const PenaltyContext& ctx) {
  const std::size_t n_layers = model.layers.size();
  Gradients grads{std::vector<Matrix>(n_layers), std::vector<Matrix>(n_layers)};
  const std::size_t bsz = cache.probs.rows();

  Matrix g = cache.probs;
  for (std::size_t r = 0; r < bsz; ++r) g(r, static_cast<std::size_t>(cache.labels[r])) -= 1.0;
  g *= 1.0 / static_cast<double>(bsz);

  for (std::size_t i = n_layers - 1; i-- > 0;) {
    const Layer& layer = model.layers[i];
    const Matrix& x = cache.inputs[i];
    switch (layer.spec.type) {
      case LayerType::Dense:
        grads.weight[i] = matmul_tn(x, g);
        grads.bias[i] = column_sums(g);
        g = matmul_nt(g, layer.weight);
        break;
      case LayerType::Conv2D: {
        const std::size_t positions = layer.out_shape.height * layer.out_shape.width;
        const Matrix gy = reshaped(std::move(g), bsz * positions, layer.spec.out_channels);
        grads.weight[i] = matmul_tn(cache.patches[i], gy);
        grads.bias[i] = column_sums(gy);
        g = col2im(matmul_nt(gy, layer.weight), layer, bsz);
        break;
      }
      case LayerType::ReLU:
        for (std::size_t k = 0; k < g.size(); ++k)
          if (!(x.data()[k] > 0.0)) g.data()[k] = 0.0;
        break;
      case LayerType::SoftmaxXent:
        break;
    }
    if (layer.spec.has_weights()) {
      if (ctx.weight_decay != 0.0) grads.weight[i] += (2.0 * ctx.weight_decay) * layer.weight;
      if (!cache.reg[i].grad.empty()) grads.weight[i] += cache.reg[i].grad;
    }
  }
  return grads;
}

LayerStats layer_stats(const Matrix& w, const RegOptions& opts, std::uint64_t seed) {
  LayerStats s;
  s.sigma = std::abs(sym_eig_dominant(minus_identity(gram(w))).value);
  try {
    s.power_sigma = power_iterate_gram_shift(w, opts.iters, seed).sigma;
  } catch (const ZeroIterate&) {
    s.power_sigma = 0.0;
  }
  if (w.cols() >= 2) {
    try {
      s.coherence = mutual_coherence(w);
    } catch (const ZeroColumn&) {
      s.coherence = std::numeric_limits<double>::quiet_NaN();
    }
  }
  const Matrix g = gram(w);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    const double nrm = std::sqrt(g(j, j));
    lo = std::min(lo, nrm);
    hi = std::max(hi, nrm);
    sum += nrm;
  }
  s.col_norm_mean = sum / static_cast<double>(w.cols());
  s.col_norm_spread = hi - lo;
  return s;
}

double accuracy(const Model& model, const Dataset& ds) {
  constexpr std::size_t kChunk = 256;
  const PenaltyContext none;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < ds.size(); start += kChunk) {
    const std::size_t end = std::min(ds.size(), start + kChunk);
    std::vector<std::size_t> idx(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Dataset chunk = subset(ds, idx);
    correct += forward(model, chunk.features, chunk.labels, none).cache.correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

TrainResult train(const TrainConfig& cfg, const Dataset& train_set, const Dataset& val_set) {
  cfg.validate();
  if (train_set.size() == 0) throw ConfigError("dataset: training set is empty");
  if (val_set.size() == 0) throw ConfigError("dataset: validation set is empty");
  train_set.validate();
  val_set.validate();
  if (val_set.dims() != train_set.dims()) throw ShapeMismatch("train/validation feature dims differ");

  TrainResult result;
  Model& model = result.model;
  model = build_model(cfg, train_set.dims(), train_set.num_classes, derive_seed(cfg.seed, 1));
  const auto weight_layers = model.weight_layers();

  std::vector<Matrix> vel_w(model.layers.size()), vel_b(model.layers.size());
  for (std::size_t i : weight_layers) {
    vel_w[i] = Matrix(model.layers[i].weight.rows(), model.layers[i].weight.cols());
    vel_b[i] = Matrix(1, model.layers[i].bias.cols());
  }

  Rng shuffle_rng(derive_seed(cfg.seed, 2));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    PenaltyContext ctx;
    ctx.kind = cfg.reg_kind;
    ctx.lambda = lambda_at(cfg.schedule, epoch);
    ctx.weight_decay = weight_decay_at(cfg.schedule, cfg.reg_kind, epoch);
    ctx.options = cfg.reg_options;
    ctx.regularize_classifier = cfg.regularize_classifier;
    ctx.threads = cfg.threads;
    const double lr = piecewise_at(cfg.learning_rate, cfg.lr_breakpoints, epoch);

    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t step = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++step) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const Dataset batch =
          subset(train_set, std::vector<std::size_t>(order.begin() + start, order.begin() + end));
      ctx.options.seed = derive_seed(cfg.seed, 3, static_cast<std::uint64_t>(epoch), step);
      const ForwardResult fr = forward(model, batch.features, batch.labels, ctx);
      if (!std::isfinite(fr.loss)) {
        throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                                std::to_string(step),
                            result.record);
      }
      loss_sum += fr.loss * static_cast<double>(batch.size());
      correct += fr.cache.correct;
      const Gradients grads = backward(model, fr.cache, ctx);
      for (std::size_t i : weight_layers) {
        vel_w[i] *= cfg.momentum;
        vel_w[i] += grads.weight[i];
        vel_b[i] *= cfg.momentum;
        vel_b[i] += grads.bias[i];
        model.layers[i].weight -= lr * vel_w[i];
        model.layers[i].bias -= lr * vel_b[i];
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lambda = ctx.lambda;
    rec.weight_decay = ctx.weight_decay;
    rec.learning_rate = lr;
    rec.train_loss = loss_sum / static_cast<double>(train_set.size());
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_set.size());
    rec.val_accuracy = accuracy(model, val_set);
    double sigma_sum = 0.0;
    for (std::size_t k = 0; k < weight_layers.size(); ++k) {
      const Matrix& w = model.layers[weight_layers[k]].weight;
      rec.layers.push_back(
          layer_stats(w, cfg.reg_options, derive_seed(cfg.seed, 4, static_cast<std::uint64_t>(epoch), k)));
      sigma_sum += rec.layers.back().sigma;
    }
    rec.mean_sigma = sigma_sum / static_cast<double>(weight_layers.size());
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.record.epochs.push_back(std::move(rec));
    if (!std::isfinite(result.record.epochs.back().train_loss)) {
      throw NonFiniteLoss("non-finite training loss at epoch " + std::to_string(epoch),
                          result.record);
    }
  }
  return result;
}

std::string record_csv(const TrainRecord& record) {
  std::string out = "epoch,lambda,weight_decay,learning_rate,train_loss,train_acc,val_acc,mean_sigma";
  const std::size_t n_layers = record.epochs.empty() ? 0 : record.epochs.front().layers.size();
  for (std::size_t i = 0; i < n_layers; ++i) {
    const std::string s = std::to_string(i);
    out += ",sigma_" + s + ",power_sigma_" + s + ",coherence_" + s + ",colnorm_mean_" + s +
           ",colnorm_spread_" + s;
  }
  out += '\n';
  for (const auto& e : record.epochs) {
    out += std::to_string(e.epoch);
    for (double v : {e.lambda, e.weight_decay, e.learning_rate, e.train_loss, e.train_accuracy,
                     e.val_accuracy, e.mean_sigma})
      out += "," + format_double(v);
    for (const auto& l : e.layers)
      for (double v : {l.sigma, l.power_sigma, l.coherence, l.col_norm_mean, l.col_norm_spread})
        out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

std::string timing_csv(const TrainRecord& record) {
  std::string out = "epoch,wall_seconds\n";
  for (const auto& e : record.epochs)
    out += std::to_string(e.epoch) + "," + format_double(e.wall_seconds) + "\n";
  return out;
}

}  // namespace orthoreg
