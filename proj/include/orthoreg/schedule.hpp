#pragma once

#include <map>
#include <string>
#include <vector>

#include "orthoreg/regularizers.hpp"

namespace orthoreg {

/// Value that takes effect from `epoch` onward (0-indexed).
struct Breakpoint {
  int epoch = 0;
  double value = 0.0;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise-constant plans for the orthogonality coefficient and the l2
/// weight-decay coefficient. Defaults follow the staged "scheme change":
/// lambda 0.1 -> 1e-3 (epoch 20) -> 1e-4 (50) -> 1e-6 (70) -> 0 (120);
/// weight decay 1e-8, raised at epoch 20 to 1e-4 for SO and 5e-4 for DSO.
struct ScheduleConfig {
  double lambda_init = 0.1;
  std::vector<Breakpoint> lambda_breakpoints = {{20, 1e-3}, {50, 1e-4}, {70, 1e-6}, {120, 0.0}};
  double wd_init = 1e-8;
  std::map<RegKind, std::vector<Breakpoint>> wd_breakpoints = {
      {RegKind::SO, {{20, 1e-4}}},
      {RegKind::DSO, {{20, 5e-4}}},
  };

  /// Throws std::invalid_argument if breakpoint epochs are not strictly
  /// increasing, an epoch is negative, or the lambda plan increases.
  void validate() const;
};

/// Value of the last breakpoint at or before `epoch`, else `init`.
double piecewise_at(double init, const std::vector<Breakpoint>& plan, int epoch);

double lambda_at(const ScheduleConfig& cfg, int epoch);
double weight_decay_at(const ScheduleConfig& cfg, RegKind kind, int epoch);

/// CSV "epoch,lambda,weight_decay" with one row per epoch in [0, epochs).
std::string schedule_csv(const ScheduleConfig& cfg, RegKind kind, int epochs);

/// Parses "20:1e-3, 50:1e-4" into breakpoints. Throws std::invalid_argument.
std::vector<Breakpoint> parse_breakpoints(std::string_view text);
std::string format_breakpoints(const std::vector<Breakpoint>& plan);

}  // namespace orthoreg
