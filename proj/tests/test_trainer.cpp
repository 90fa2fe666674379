#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "orthoreg/linalg.hpp"
#include "orthoreg/trainer.hpp"

using namespace orthoreg;

namespace {

TrainConfig mlp_config(std::size_t in, std::size_t hidden, std::size_t classes) {
  TrainConfig cfg;
  cfg.layers = {LayerSpec::dense(in, hidden), LayerSpec::relu(), LayerSpec::dense(hidden, classes),
                LayerSpec::softmax_xent()};
  return cfg;
}

// Flattens every weight and bias into one loss function for central differences.
void check_model_gradient(Model model, const Matrix& x, const std::vector<int>& y,
                          const PenaltyContext& ctx, double tol) {
  const ForwardResult fr = forward(model, x, y, ctx);
  const Gradients g = backward(model, fr.cache, ctx);
  for (std::size_t i : model.weight_layers()) {
    for (Matrix Layer::*param : {&Layer::weight, &Layer::bias}) {
      const Matrix analytic = param == &Layer::weight ? g.weight[i] : g.bias[i];
      const Matrix p0 = model.layers[i].*param;
      const Matrix fd = oracle::fd_gradient(
          [&](const Matrix& p) {
            Model m = model;
            m.layers[i].*param = p;
            return forward(m, x, y, ctx).loss;
          },
          p0);
      CHECK_MESSAGE(oracle::rel_error(analytic, fd) <= tol, "layer ", i, " kind ",
                    to_string(ctx.kind));
    }
  }
}

}  // namespace

TEST_CASE("zero weights give uniform softmax loss") {
  TrainConfig cfg;
  cfg.layers = {LayerSpec::dense(4, 3), LayerSpec::softmax_xent()};
  Model model = build_model(cfg, 4, 3, 1);
  model.layers[0].weight = Matrix(4, 3);
  const Matrix x{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  PenaltyContext ctx;
  ctx.kind = RegKind::SRIP;
  ctx.lambda = 0.0;
  const ForwardResult fr = forward(model, x, {0, 1, 2}, ctx);
  CHECK(fr.loss == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(fr.cache.penalty == 0.0);
}

TEST_CASE("no penalties means pure data loss") {
  const Model model = build_model(mlp_config(5, 6, 3), 5, 3, 2);
  const Matrix x = oracle::random_matrix(4, 5, 3);
  const ForwardResult fr = forward(model, x, {0, 1, 2, 1}, PenaltyContext{});
  CHECK(fr.loss == fr.cache.data_loss);
  CHECK(fr.loss == forward(model, x, {0, 1, 2, 1}, PenaltyContext{}).loss);
}

TEST_CASE("end-to-end gradient for every regularizer") {
  const Model model = build_model(mlp_config(5, 6, 3), 5, 3, 7);
  const Matrix x = oracle::random_matrix(8, 5, 8);
  const std::vector<int> y{0, 1, 2, 0, 1, 2, 0, 1};
  for (RegKind kind : kAllRegKinds) {
    PenaltyContext ctx;
    ctx.kind = kind;
    ctx.lambda = 0.1;
    ctx.weight_decay = 1e-3;
    ctx.options.mode = SpectralMode::Exact;
    check_model_gradient(model, x, y, ctx, 1e-5);
  }
}

TEST_CASE("conv layer gradient") {
  TrainConfig cfg;
  cfg.input_height = 4;
  cfg.input_width = 4;
  cfg.layers = {LayerSpec::conv2d(3, 3, 2, 3, 1, 1), LayerSpec::relu(), LayerSpec::conv2d(2, 2, 3, 2, 2, 0),
                LayerSpec::relu(), LayerSpec::dense(8, 3), LayerSpec::softmax_xent()};
  const Model model = build_model(cfg, 32, 3, 3);
  CHECK(model.layers[0].weight.rows() == 18);
  CHECK(model.layers[0].weight.cols() == 3);
  CHECK(model.layers[2].out_shape.size() == 8);
  PenaltyContext ctx;
  ctx.kind = RegKind::SO;
  ctx.lambda = 0.05;
  ctx.weight_decay = 1e-3;
  check_model_gradient(model, oracle::random_matrix(3, 32, 5), {2, 0, 1}, ctx, 1e-5);
}

TEST_CASE("weight decay gradient is 2 lambda2 W") {
  const Model model = build_model(mlp_config(4, 5, 3), 4, 3, 1);
  const Matrix x = oracle::random_matrix(6, 4, 2);
  const std::vector<int> y{0, 1, 2, 2, 1, 0};
  PenaltyContext plain, decayed;
  decayed.weight_decay = 0.01;
  const Gradients a = backward(model, forward(model, x, y, plain).cache, plain);
  const Gradients b = backward(model, forward(model, x, y, decayed).cache, decayed);
  for (std::size_t i : model.weight_layers()) {
    CHECK(oracle::max_abs_diff(b.weight[i] - a.weight[i], 0.02 * model.layers[i].weight) <= 1e-15);
    CHECK(b.bias[i] == a.bias[i]);
  }
}

TEST_CASE("relu blocks a zero input") {
  TrainConfig cfg;
  cfg.layers = {LayerSpec::relu(), LayerSpec::dense(3, 2), LayerSpec::softmax_xent()};
  const Model model = build_model(cfg, 3, 2, 1);
  const PenaltyContext ctx;
  const Gradients g = backward(model, forward(model, Matrix(2, 3), {0, 1}, ctx).cache, ctx);
  for (double v : g.weight[1].data()) CHECK(v == 0.0);
}

TEST_CASE("shape mismatches are reported") {
  CHECK_THROWS_AS(build_model(mlp_config(5, 6, 3), 4, 3, 1), ShapeMismatch);
  CHECK_THROWS_AS(build_model(mlp_config(5, 6, 3), 5, 4, 1), ShapeMismatch);
  TrainConfig bad = mlp_config(5, 6, 3);
  bad.layers.pop_back();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("classifier exclusion and zero lambda") {
  const Model model = build_model(mlp_config(4, 5, 3), 4, 3, 1);
  PenaltyContext ctx;
  ctx.kind = RegKind::SRIP;
  ctx.lambda = 0.1;
  CHECK(is_regularized(model, 0, ctx));
  CHECK(is_regularized(model, 2, ctx));
  CHECK_FALSE(is_regularized(model, 1, ctx));
  ctx.regularize_classifier = false;
  CHECK_FALSE(is_regularized(model, 2, ctx));
  ctx.lambda = 0.0;
  CHECK_FALSE(is_regularized(model, 0, ctx));
}

TEST_CASE("orthogonal initialization") {
  const Matrix tall = init_orthogonal(5, 3, 1);
  CHECK(std::abs(sym_eig_dominant(minus_identity(gram(tall))).value) <= 1e-10);
  const Matrix wide = init_orthogonal(3, 5, 1);
  CHECK(std::abs(sym_eig_dominant(minus_identity(gram_rows(wide))).value) <= 1e-10);
  const Matrix other = init_orthogonal(5, 3, 2);
  CHECK_FALSE(other == tall);
  CHECK(std::abs(sym_eig_dominant(minus_identity(gram(other))).value) <= 1e-10);
}

TEST_CASE("layer stats: exact sigma bounds the power estimate") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix w = oracle::random_weight(7, 4, seed);
    const LayerStats s = layer_stats(w, RegOptions{}, seed);
    CHECK(s.power_sigma <= s.sigma + 1e-12);
    CHECK(s.coherence >= 0.0);
    CHECK(s.col_norm_spread >= 0.0);
  }
  Matrix z = oracle::random_weight(4, 3, 1);
  for (std::size_t r = 0; r < 4; ++r) z(r, 1) = 0.0;
  CHECK(std::isnan(layer_stats(z, RegOptions{}, 0).coherence));
}

TEST_CASE("training is deterministic and follows the schedule") {
  TrainConfig cfg = mlp_config(6, 8, 3);
  cfg.epochs = 4;
  cfg.batch_size = 16;
  cfg.schedule.lambda_breakpoints = {{2, 0.0}};
  const Dataset ds = gen_blobs(1, 30, 3, 6, 0.3);
  const auto [tr, va] = split(ds, 0.25, 1);
  const TrainResult a = train(cfg, tr, va);
  const TrainResult b = train(cfg, tr, va);
  CHECK(record_csv(a.record) == record_csv(b.record));
  REQUIRE(a.record.epochs.size() == 4);
  CHECK(a.record.epochs[1].lambda == 0.1);
  CHECK(a.record.epochs[2].lambda == 0.0);
  CHECK(a.record.epochs[3].weight_decay == 1e-8);

  TrainConfig threaded = cfg;
  threaded.threads = 2;
  CHECK(record_csv(train(threaded, tr, va).record) == record_csv(a.record));

  const std::string csv = record_csv(a.record);
  CHECK(csv.rfind("epoch,lambda,weight_decay,learning_rate,train_loss,train_acc,val_acc,mean_sigma,"
                  "sigma_0,power_sigma_0,coherence_0,colnorm_mean_0,colnorm_spread_0,sigma_1,",
                  0) == 0);
  CHECK(timing_csv(a.record).rfind("epoch,wall_seconds\n", 0) == 0);
}

TEST_CASE("training penalty after the schedule ends") {
  TrainConfig cfg = mlp_config(4, 5, 3);
  cfg.epochs = 1;
  PenaltyContext ctx;
  ctx.kind = RegKind::SRIP;
  ctx.lambda = lambda_at(cfg.schedule, 130);
  const Model model = build_model(cfg, 4, 3, 1);
  const ForwardResult fr = forward(model, oracle::random_matrix(3, 4, 1), {0, 1, 2}, ctx);
  CHECK(fr.cache.penalty == 0.0);
}

TEST_CASE("empty training set is rejected") {
  TrainConfig cfg = mlp_config(4, 5, 3);
  const Dataset ds = gen_blobs(1, 10, 3, 4, 0.3);
  CHECK_THROWS_AS(train(cfg, Dataset{}, ds), ConfigError);
}

TEST_CASE("divergence raises NonFiniteLoss with the partial record") {
  TrainConfig cfg;
  cfg.layers = {LayerSpec::dense(4, 3), LayerSpec::softmax_xent()};
  cfg.epochs = 50;
  cfg.learning_rate = 1e300;
  cfg.reg_kind = RegKind::None;
  const Dataset ds = gen_blobs(1, 20, 3, 4, 0.3);
  const auto [tr, va] = split(ds, 0.25, 1);
  CHECK_THROWS_AS(train(cfg, tr, va), NonFiniteLoss);
}
