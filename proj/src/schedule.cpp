#include "orthoreg/schedule.hpp"

#include <charconv>
#include <stdexcept>

#include "orthoreg/format.hpp"

namespace orthoreg {

namespace {

void check_increasing(const std::vector<Breakpoint>& plan, const std::string& name) {
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (plan[i].epoch < 0) throw std::invalid_argument(name + ": negative breakpoint epoch");
    if (i > 0 && plan[i].epoch <= plan[i - 1].epoch) {
      throw std::invalid_argument(name + ": breakpoint epochs must be strictly increasing");
    }
  }
}

}  // namespace

void ScheduleConfig::validate() const {
  check_increasing(lambda_breakpoints, "lambda_breakpoints");
  double prev = lambda_init;
  for (const auto& bp : lambda_breakpoints) {
    if (bp.value > prev) throw std::invalid_argument("lambda plan must be non-increasing");
    prev = bp.value;
  }
  if (lambda_init < 0.0 || wd_init < 0.0) throw std::invalid_argument("coefficients must be >= 0");
  for (const auto& [kind, plan] : wd_breakpoints) {
    check_increasing(plan, "wd_breakpoints_" + std::string(to_string(kind)));
    for (const auto& bp : plan)
      if (bp.value < 0.0) throw std::invalid_argument("weight decay must be >= 0");
  }
}

double piecewise_at(double init, const std::vector<Breakpoint>& plan, int epoch) {
  double value = init;
  for (const auto& bp : plan) {
    if (bp.epoch > epoch) break;
    value = bp.value;
  }
  return value;
}

double lambda_at(const ScheduleConfig& cfg, int epoch) {
  return piecewise_at(cfg.lambda_init, cfg.lambda_breakpoints, epoch);
}

double weight_decay_at(const ScheduleConfig& cfg, RegKind kind, int epoch) {
  const auto it = cfg.wd_breakpoints.find(kind);
  if (it == cfg.wd_breakpoints.end()) return cfg.wd_init;
  return piecewise_at(cfg.wd_init, it->second, epoch);
}

std::string schedule_csv(const ScheduleConfig& cfg, RegKind kind, int epochs) {
  std::string out = "epoch,lambda,weight_decay\n";
  for (int e = 0; e < epochs; ++e) {
    out += std::to_string(e);
    out += ',';
    out += format_double(lambda_at(cfg, e));
    out += ',';
    out += format_double(weight_decay_at(cfg, kind, e));
    out += '\n';
  }
  return out;
}

std::vector<Breakpoint> parse_breakpoints(std::string_view text) {
  std::vector<Breakpoint> plan;
  text = trim(text);
  if (text.empty() || text == "none") return plan;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("breakpoint '" + std::string(item) + "' is not epoch:value");
    }
    const auto epoch_text = trim(item.substr(0, colon));
    int epoch = 0;
    const auto res = std::from_chars(epoch_text.data(), epoch_text.data() + epoch_text.size(), epoch);
    const auto value = parse_double(item.substr(colon + 1));
    if (res.ec != std::errc() || res.ptr != epoch_text.data() + epoch_text.size() || !value) {
      throw std::invalid_argument("breakpoint '" + std::string(item) + "' is not epoch:value");
    }
    plan.push_back({epoch, *value});
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return plan;
}

std::string format_breakpoints(const std::vector<Breakpoint>& plan) {
  if (plan.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(plan[i].epoch) + ":" + format_double(plan[i].value);
  }
  return out;
}

}  // namespace orthoreg
