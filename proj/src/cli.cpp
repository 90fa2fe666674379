#include "orthoreg/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "orthoreg/analysis.hpp"
#include "orthoreg/config.hpp"
#include "orthoreg/errors.hpp"
#include "orthoreg/format.hpp"
#include "orthoreg/linalg.hpp"
#include "orthoreg/matrix_io.hpp"
#include "orthoreg/rng.hpp"
#include "orthoreg/schedule.hpp"
#include "orthoreg/trainer.hpp"

namespace orthoreg {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

std::vector<GradcheckRow> run_gradcheck(RegKind kind, std::size_t rows, std::size_t cols,
                                        std::uint64_t seeds, double tolerance, double lambda,
                                        double h, double tie_gap) {
  RegOptions opts;
  opts.mode = SpectralMode::Exact;
  std::vector<GradcheckRow> out;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    Rng rng(seed);
    Matrix w(rows, cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    for (double& x : w.data()) x = scale * rng.normal();

    GradcheckRow row{seed, 0.0, false, false};
    if (selector_gap(kind, w, opts) < tie_gap) {
      row.skipped = true;
      row.passed = true;
      out.push_back(row);
      continue;
    }
    const Matrix analytic = evaluate(kind, w, lambda, opts).grad;
    double diff_sq = 0.0, a_sq = 0.0, fd_sq = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      Matrix plus = w, minus = w;
      plus.data()[k] += h;
      minus.data()[k] -= h;
      const double fd =
          (evaluate(kind, plus, lambda, opts).value - evaluate(kind, minus, lambda, opts).value) / (2 * h);
      const double a = analytic.data()[k];
      diff_sq += (a - fd) * (a - fd);
      a_sq += a * a;
      fd_sq += fd * fd;
    }
    const double denom = std::max({std::sqrt(a_sq), std::sqrt(fd_sq), 1e-10});
    row.max_rel_error = std::sqrt(diff_sq) / denom;
    row.passed = row.max_rel_error <= tolerance;
    out.push_back(row);
  }
  return out;
}

namespace {

struct Shape2 {
  std::size_t rows = 0, cols = 0;
};

std::optional<Shape2> parse_shape(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) return std::nullopt;
  const auto r = parse_double(text.substr(0, x));
  const auto c = parse_double(text.substr(x + 1));
  if (!r || !c || *r < 1 || *c < 1 || *r != std::floor(*r) || *c != std::floor(*c)) return std::nullopt;
  return Shape2{static_cast<std::size_t>(*r), static_cast<std::size_t>(*c)};
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int cmd_gradcheck(const std::string& reg, const std::string& shape_text, std::uint64_t seeds,
                  double tol, double lambda, double h, std::ostream& out, std::ostream& err) {
  RegKind kind;
  try {
    kind = parse_reg_kind(reg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--reg: ") + e.what());
  }
  const auto shape = parse_shape(shape_text);
  if (!shape) throw UsageError("--shape: expected ROWSxCOLS with positive integers, got '" + shape_text + "'");
  if (seeds < 1) throw UsageError("--seeds: must be >= 1");
  if (!(tol > 0.0)) throw UsageError("--tol: must be positive");
  if (!(lambda >= 0.0)) throw UsageError("--lambda: must be >= 0");
  if (!(h > 0.0)) throw UsageError("--h: must be positive");

  const auto rows = run_gradcheck(kind, shape->rows, shape->cols, seeds, tol, lambda, h);
  out << "seed,max_rel_error,status\n";
  std::size_t failed = 0, skipped = 0;
  for (const auto& r : rows) {
    const char* status = r.skipped ? "skipped" : (r.passed ? "pass" : "fail");
    out << r.seed << "," << format_double(r.max_rel_error) << "," << status << "\n";
    failed += !r.passed;
    skipped += r.skipped;
  }
  err << "gradcheck " << to_string(kind) << " " << shape->rows << "x" << shape->cols << ": "
      << rows.size() - failed - skipped << " passed, " << failed << " failed, " << skipped
      << " skipped (ties)\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_analyze(const std::string& path, const std::vector<int>& ks, const std::string& format,
                std::uint64_t budget, int threads, std::ostream& out, std::ostream& err) {
  if (format != "text" && format != "csv") throw UsageError("--format: expected text or csv");
  if (threads < 1) throw UsageError("--threads: must be >= 1");
  Matrix w;
  try {
    w = read_matrix(path);
  } catch (const Error& e) {
    err << "error: cannot load matrix '" << path << "': " << e.what() << "\n";
    return kExitFailure;
  }
  for (int k : ks) {
    if (k < 1 || static_cast<std::size_t>(k) > w.cols()) {
      throw UsageError("--ks: k=" + std::to_string(k) + " outside [1, " + std::to_string(w.cols()) +
                       "] for a matrix with " + std::to_string(w.cols()) + " columns");
    }
  }
  const OrthoReport r = report(w, ks, RipOptions{budget, threads});
  out << (format == "csv" ? report_csv(r) : report_text(r));
  if (r.partial()) {
    err << "warning: RIP enumeration budget exceeded; rip_delta values flagged partial are lower bounds\n";
    return kExitPartial;
  }
  return kExitOk;
}

std::string manifest_text(const ExperimentConfig& cfg, const std::string& config_bytes,
                          const Model& model, const std::vector<std::string>& files) {
  std::ostringstream m;
  m << "orthoreg training manifest v1\n"
    << "seed = " << cfg.train.seed << "\n"
    << "config_sha256 = " << sha256_hex(config_bytes) << "\n"
    << "rng = " << Rng::kAlgorithm << "\n"
    << "regularizer = " << to_string(cfg.train.reg_kind) << "\n"
    << "epochs = " << cfg.train.epochs << "\n\n[layers]\n";
  std::size_t f = 0;
  for (std::size_t i : model.weight_layers()) {
    const Layer& l = model.layers[i];
    m << "layer " << i << ": ";
    if (l.spec.type == LayerType::Dense) {
      m << "dense " << l.spec.in << "x" << l.spec.out;
    } else {
      m << "conv " << l.spec.width << "x" << l.spec.height << "x" << l.spec.in_channels << "x"
        << l.spec.out_channels << " stored as " << l.weight.rows() << "x" << l.weight.cols();
    }
    m << " weight=" << files[f] << " bias=" << files[f + 1] << "\n";
    f += 2;
  }
  m << "\n[config]\n" << dump_experiment_config(cfg) << "\n[schedule]\n"
    << schedule_csv(cfg.train.schedule, cfg.train.reg_kind, cfg.train.epochs);
  return m.str();
}

int cmd_train(const std::string& config_path, const std::string& out_dir, int threads,
              std::ostream& out, std::ostream& err) {
  if (!fs::exists(config_path)) {
    err << "error: config file not found: " << config_path << "\n";
    return kExitFailure;
  }
  const std::string config_bytes = read_file(config_path);
  ExperimentConfig cfg;
  try {
    cfg = parse_experiment_config(config_bytes);
    if (threads > 0) cfg.train.threads = threads;
    cfg.train.validate();
  } catch (const ConfigError& e) {
    throw UsageError(std::string(e.what()) + " in " + config_path);
  }

  std::pair<Dataset, Dataset> data;
  try {
    data = load_experiment_data(cfg.data);
  } catch (const ConfigError& e) {
    throw UsageError(std::string(e.what()) + " in " + config_path);
  }

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  TrainResult result;
  try {
    result = train(cfg.train, data.first, data.second);
  } catch (const NonFiniteLoss& e) {
    write_file(dir / "record.csv", record_csv(e.partial_record()));
    write_file(dir / "timing.csv", timing_csv(e.partial_record()));
    err << "error: " << e.what() << "; partial record written to " << (dir / "record.csv").string()
        << "\n";
    return kExitFailure;
  }

  write_file(dir / "record.csv", record_csv(result.record));
  write_file(dir / "timing.csv", timing_csv(result.record));
  std::vector<std::string> files;
  for (std::size_t i : result.model.weight_layers()) {
    const std::string wname = "layer" + std::to_string(i) + "_weight.matf";
    const std::string bname = "layer" + std::to_string(i) + "_bias.matf";
    write_matf(dir / wname, result.model.layers[i].weight);
    write_matf(dir / bname, result.model.layers[i].bias);
    files.push_back(wname);
    files.push_back(bname);
  }
  write_file(dir / "manifest.txt", manifest_text(cfg, config_bytes, result.model, files));

  const auto& last = result.record.epochs.back();
  out << "trained " << result.record.epochs.size() << " epochs: val_acc=" << format_double(last.val_accuracy)
      << " mean_sigma=" << format_double(last.mean_sigma) << " -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_schedule_dump(const std::string& config_path, int epochs, const std::string& reg,
                      std::ostream& out) {
  if (epochs < 1) throw UsageError("--epochs: must be >= 1");
  ScheduleConfig schedule;
  RegKind kind = RegKind::SRIP;
  if (!config_path.empty()) {
    try {
      const ExperimentConfig cfg = load_experiment_config(config_path);
      schedule = cfg.train.schedule;
      kind = cfg.train.reg_kind;
    } catch (const ConfigError& e) {
      throw UsageError(std::string(e.what()) + " in " + config_path);
    }
  }
  if (!reg.empty()) {
    try {
      kind = parse_reg_kind(reg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--reg: ") + e.what());
    }
  }
  out << schedule_csv(schedule, kind, epochs);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonality regularizers: gradient checks, matrix analysis, training runs", "orthoreg"};
  app.require_subcommand(1);

  std::string reg = "so", shape = "6x4", format = "text", config_path, out_dir = "run", dump_config,
              dump_reg;
  std::uint64_t seeds = 100, budget = 1'000'000;
  double tol = 1e-4, lambda = 0.1, h = 1e-6;
  std::string matrix_path;
  std::vector<int> ks;
  int threads = 1, train_threads = 0, epochs = 200;

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of a regularizer gradient");
  grad->set_help_flag("--help", "Print this help message and exit");
  grad->add_option("--reg", reg, "none|so|dso|selective_so|mc|srip|sr")->capture_default_str();
  grad->add_option("--shape", shape, "Matrix shape ROWSxCOLS")->capture_default_str();
  grad->add_option("--seeds", seeds, "Number of random matrices")->capture_default_str();
  grad->add_option("--tol", tol, "Relative error tolerance")->capture_default_str();
  grad->add_option("--lambda", lambda, "Regularization coefficient")->capture_default_str();
  grad->add_option("--h", h, "Central-difference step")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Orthogonality report for a MATF or CSV matrix");
  analyze->add_option("matrix", matrix_path, "Matrix file")->required();
  analyze->add_option("--ks", ks, "RIP sparsity levels, comma separated")->delimiter(',');
  analyze->add_option("--format", format, "text|csv")->capture_default_str();
  analyze->add_option("--budget", budget, "Max column subsets for RIP enumeration")->capture_default_str();
  analyze->add_option("--threads", threads, "Worker threads for RIP enumeration")->capture_default_str();

  auto* trn = app.add_subcommand("train", "Run a training experiment from a config file");
  trn->add_option("config", config_path, "Experiment config file")->required();
  trn->add_option("--out", out_dir, "Output directory")->capture_default_str();
  trn->add_option("--threads", train_threads, "Override [train] threads");

  auto* sched = app.add_subcommand("schedule-dump", "Print the lambda / weight-decay plan as CSV");
  sched->add_option("--config", dump_config, "Experiment config file (defaults otherwise)");
  sched->add_option("--epochs", epochs, "Number of epochs")->capture_default_str();
  sched->add_option("--reg", dump_reg, "Regularizer kind (overrides the config)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*grad) return cmd_gradcheck(reg, shape, seeds, tol, lambda, h, out, err);
    if (*analyze) return cmd_analyze(matrix_path, ks, format, budget, threads, out, err);
    if (*trn) return cmd_train(config_path, out_dir, train_threads, out, err);
    if (*sched) return cmd_schedule_dump(dump_config, epochs, dump_reg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace orthoreg
