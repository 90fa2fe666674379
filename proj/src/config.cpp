#include "orthoreg/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "orthoreg/errors.hpp"
#include "orthoreg/format.hpp"
#include "orthoreg/matrix_io.hpp"

namespace orthoreg {

namespace {

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    parts.push_back(trim(text.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    text = text.substr(pos + 1);
  }
  return parts;
}

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
  s = trim(s);
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError("config key '" + key + "': invalid value '" + value + "' (" + why + ")");
}

double as_double(const std::string& key, const std::string& v) {
  const auto d = parse_double(v);
  if (!d) bad_value(key, v, "expected a number");
  return *d;
}

template <typename T>
T as_integer(const std::string& key, const std::string& v) {
  const auto i = parse_integer<T>(v);
  if (!i) bad_value(key, v, "expected an integer");
  return *i;
}

bool as_bool(const std::string& key, const std::string& v) {
  const auto t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad_value(key, v, "expected true or false");
}

std::size_t dim(std::string_view item, std::string_view part) {
  const auto v = parse_integer<std::size_t>(part);
  if (!v) throw std::invalid_argument("layer '" + std::string(item) + "': bad number '" + std::string(part) + "'");
  return *v;
}

InitSpec parse_init(std::string_view text) {
  const auto parts = split_on(text, ':');
  if (parts[0] == "orthogonal" && parts.size() == 1) return {InitKind::Orthogonal, 0.0};
  if (parts[0] == "gaussian" && parts.size() <= 2) {
    InitSpec spec{InitKind::Gaussian, 0.0};
    if (parts.size() == 2) {
      const auto sd = parse_double(parts[1]);
      if (!sd || *sd < 0.0) throw std::invalid_argument("bad gaussian stddev");
      spec.stddev = *sd;
    }
    return spec;
  }
  throw std::invalid_argument("expected orthogonal, gaussian or gaussian:<stddev>");
}

std::string format_init(const InitSpec& init) {
  if (init.kind == InitKind::Orthogonal) return "orthogonal";
  return init.stddev > 0.0 ? "gaussian:" + format_double(init.stddev) : "gaussian";
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

// Wraps parsers that throw std::invalid_argument so the error names the key.
template <typename F>
Setter guarded(F f) {
  return [f](ExperimentConfig& c, const std::string& key, const std::string& value) {
    try {
      f(c, key, value);
    } catch (const std::invalid_argument& e) {
      bad_value(key, value, e.what());
    }
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["model.layers"] = guarded([](auto& c, auto&, auto& v) { c.train.layers = parse_layers(v); });
    t["model.init"] = guarded([](auto& c, auto&, auto& v) { c.train.init = parse_init(v); });
    t["model.input_shape"] = [](auto& c, auto& k, auto& v) {
      const auto parts = split_on(v, 'x');
      if (parts.size() != 2) bad_value(k, v, "expected HxW");
      c.train.input_height = as_integer<std::size_t>(k, std::string(parts[0]));
      c.train.input_width = as_integer<std::size_t>(k, std::string(parts[1]));
    };
    t["regularizer.kind"] = guarded([](auto& c, auto&, auto& v) { c.train.reg_kind = parse_reg_kind(trim(v)); });
    t["regularizer.srip_mode"] =
        guarded([](auto& c, auto&, auto& v) { c.train.reg_options.mode = parse_spectral_mode(trim(v)); });
    t["regularizer.power_iters"] = [](auto& c, auto& k, auto& v) { c.train.reg_options.iters = as_integer<int>(k, v); };
    t["regularizer.regularize_classifier"] = [](auto& c, auto& k, auto& v) { c.train.regularize_classifier = as_bool(k, v); };
    t["regularizer.mc_offdiag_only"] = [](auto& c, auto& k, auto& v) { c.train.reg_options.mc_offdiag_only = as_bool(k, v); };
    t["schedule.lambda_init"] = [](auto& c, auto& k, auto& v) { c.train.schedule.lambda_init = as_double(k, v); };
    t["schedule.lambda_breakpoints"] =
        guarded([](auto& c, auto&, auto& v) { c.train.schedule.lambda_breakpoints = parse_breakpoints(v); });
    t["schedule.wd_init"] = [](auto& c, auto& k, auto& v) { c.train.schedule.wd_init = as_double(k, v); };
    for (RegKind kind : kAllRegKinds) {
      t["schedule.wd_breakpoints_" + std::string(to_string(kind))] =
          guarded([kind](auto& c, auto&, auto& v) { c.train.schedule.wd_breakpoints[kind] = parse_breakpoints(v); });
    }
    t["optimizer.learning_rate"] = [](auto& c, auto& k, auto& v) { c.train.learning_rate = as_double(k, v); };
    t["optimizer.lr_breakpoints"] = guarded([](auto& c, auto&, auto& v) { c.train.lr_breakpoints = parse_breakpoints(v); });
    t["optimizer.momentum"] = [](auto& c, auto& k, auto& v) { c.train.momentum = as_double(k, v); };
    t["train.epochs"] = [](auto& c, auto& k, auto& v) { c.train.epochs = as_integer<int>(k, v); };
    t["train.batch_size"] = [](auto& c, auto& k, auto& v) { c.train.batch_size = as_integer<std::size_t>(k, v); };
    t["train.seed"] = [](auto& c, auto& k, auto& v) { c.train.seed = as_integer<std::uint64_t>(k, v); };
    t["train.threads"] = [](auto& c, auto& k, auto& v) { c.train.threads = as_integer<int>(k, v); };
    t["data.source"] = [](auto& c, auto& k, auto& v) {
      const auto s = trim(v);
      if (s == "blobs") c.data.source = DataConfig::Source::Blobs;
      else if (s == "csv") c.data.source = DataConfig::Source::Csv;
      else bad_value(k, v, "expected blobs or csv");
    };
    t["data.blobs_seed"] = [](auto& c, auto& k, auto& v) { c.data.blobs_seed = as_integer<std::uint64_t>(k, v); };
    t["data.n_per_class"] = [](auto& c, auto& k, auto& v) { c.data.n_per_class = as_integer<std::size_t>(k, v); };
    t["data.classes"] = [](auto& c, auto& k, auto& v) { c.data.classes = as_integer<int>(k, v); };
    t["data.dims"] = [](auto& c, auto& k, auto& v) { c.data.dims = as_integer<std::size_t>(k, v); };
    t["data.spread"] = [](auto& c, auto& k, auto& v) { c.data.spread = as_double(k, v); };
    t["data.csv_path"] = [](auto& c, auto&, auto& v) { c.data.csv_path = std::string(trim(v)); };
    t["data.label_column"] = [](auto& c, auto& k, auto& v) { c.data.csv.label_column = as_integer<std::size_t>(k, v); };
    t["data.csv_header"] = [](auto& c, auto& k, auto& v) { c.data.csv.has_header = as_bool(k, v); };
    t["data.val_fraction"] = [](auto& c, auto& k, auto& v) { c.data.val_fraction = as_double(k, v); };
    t["data.split_seed"] = [](auto& c, auto& k, auto& v) { c.data.split_seed = as_integer<std::uint64_t>(k, v); };
    return t;
  }();
  return table;
}

}  // namespace

std::vector<LayerSpec> parse_layers(std::string_view text) {
  std::vector<LayerSpec> layers;
  for (std::string_view item : split_on(text, ',')) {
    const auto parts = split_on(item, ':');
    if (parts[0] == "dense" && parts.size() == 3) {
      layers.push_back(LayerSpec::dense(dim(item, parts[1]), dim(item, parts[2])));
    } else if (parts[0] == "conv" && parts.size() >= 5 && parts.size() <= 7) {
      layers.push_back(LayerSpec::conv2d(dim(item, parts[1]), dim(item, parts[2]), dim(item, parts[3]),
                                         dim(item, parts[4]), parts.size() > 5 ? dim(item, parts[5]) : 1,
                                         parts.size() > 6 ? dim(item, parts[6]) : 0));
    } else if (parts[0] == "relu" && parts.size() == 1) {
      layers.push_back(LayerSpec::relu());
    } else if (parts[0] == "softmax_xent" && parts.size() == 1) {
      layers.push_back(LayerSpec::softmax_xent());
    } else {
      throw std::invalid_argument("unknown layer '" + std::string(item) + "'");
    }
  }
  return layers;
}

std::string format_layers(const std::vector<LayerSpec>& layers) {
  std::string out;
  for (const auto& l : layers) {
    if (!out.empty()) out += ", ";
    switch (l.type) {
      case LayerType::Dense:
        out += "dense:" + std::to_string(l.in) + ":" + std::to_string(l.out);
        break;
      case LayerType::Conv2D:
        out += "conv:" + std::to_string(l.width) + ":" + std::to_string(l.height) + ":" +
               std::to_string(l.in_channels) + ":" + std::to_string(l.out_channels) + ":" +
               std::to_string(l.stride) + ":" + std::to_string(l.padding);
        break;
      case LayerType::ReLU: out += "relu"; break;
      case LayerType::SoftmaxXent: out += "softmax_xent"; break;
    }
  }
  return out;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig cfg;
  cfg.train.layers = {LayerSpec::dense(16, 32), LayerSpec::relu(), LayerSpec::dense(32, 3),
                      LayerSpec::softmax_xent()};
  const auto& table = setters();
  for (const auto& [section, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError("unknown config key '" + section + "' (keys must be inside a [section])");
    }
    for (const auto& [key, leaf] : node) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("unknown config key '" + full + "'");
      it->second(cfg, full, leaf.data());
    }
  }
  cfg.train.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const FormatError&) {
    throw FormatError("cannot read config file " + path.string());
  }
  return parse_experiment_config(text);
}

std::string dump_experiment_config(const ExperimentConfig& c) {
  const TrainConfig& t = c.train;
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "[model]\n"
    << "layers = " << format_layers(t.layers) << "\n"
    << "init = " << format_init(t.init) << "\n"
    << "input_shape = " << t.input_height << "x" << t.input_width << "\n\n"
    << "[regularizer]\n"
    << "kind = " << to_string(t.reg_kind) << "\n"
    << "srip_mode = " << to_string(t.reg_options.mode) << "\n"
    << "power_iters = " << t.reg_options.iters << "\n"
    << "regularize_classifier = " << b(t.regularize_classifier) << "\n"
    << "mc_offdiag_only = " << b(t.reg_options.mc_offdiag_only) << "\n\n"
    << "[schedule]\n"
    << "lambda_init = " << format_double(t.schedule.lambda_init) << "\n"
    << "lambda_breakpoints = " << format_breakpoints(t.schedule.lambda_breakpoints) << "\n"
    << "wd_init = " << format_double(t.schedule.wd_init) << "\n";
  for (const auto& [kind, plan] : t.schedule.wd_breakpoints)
    o << "wd_breakpoints_" << to_string(kind) << " = " << format_breakpoints(plan) << "\n";
  o << "\n[optimizer]\n"
    << "learning_rate = " << format_double(t.learning_rate) << "\n"
    << "lr_breakpoints = " << format_breakpoints(t.lr_breakpoints) << "\n"
    << "momentum = " << format_double(t.momentum) << "\n\n"
    << "[train]\n"
    << "epochs = " << t.epochs << "\n"
    << "batch_size = " << t.batch_size << "\n"
    << "seed = " << t.seed << "\n"
    << "threads = " << t.threads << "\n\n"
    << "[data]\n"
    << "source = " << (c.data.source == DataConfig::Source::Blobs ? "blobs" : "csv") << "\n"
    << "blobs_seed = " << c.data.blobs_seed << "\n"
    << "n_per_class = " << c.data.n_per_class << "\n"
    << "classes = " << c.data.classes << "\n"
    << "dims = " << c.data.dims << "\n"
    << "spread = " << format_double(c.data.spread) << "\n";
  if (!c.data.csv_path.empty()) o << "csv_path = " << c.data.csv_path.string() << "\n";
  o << "label_column = " << c.data.csv.label_column << "\n"
    << "csv_header = " << b(c.data.csv.has_header) << "\n"
    << "val_fraction = " << format_double(c.data.val_fraction) << "\n"
    << "split_seed = " << c.data.split_seed << "\n";
  return o.str();
}

std::pair<Dataset, Dataset> load_experiment_data(const DataConfig& cfg) {
  Dataset full;
  if (cfg.source == DataConfig::Source::Blobs) {
    if (cfg.n_per_class == 0) throw ConfigError("data.n_per_class: no training examples requested");
    if (cfg.classes < 1 || cfg.dims == 0) throw ConfigError("data: classes and dims must be positive");
    full = gen_blobs(cfg.blobs_seed, cfg.n_per_class, cfg.classes, cfg.dims, cfg.spread);
  } else {
    if (cfg.csv_path.empty()) throw ConfigError("data.csv_path: required when source = csv");
    full = load_csv(cfg.csv_path, cfg.csv);
  }
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0)) {
    throw ConfigError("data.val_fraction: must lie in (0, 1)");
  }
  return split(full, cfg.val_fraction, cfg.split_seed);
}

}  // namespace orthoreg
