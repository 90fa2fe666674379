#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "orthoreg/regularizers.hpp"

namespace orthoreg {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitPartial = 3 };

/// Runs the command line `args` (args[0] is the program name) and returns the
/// exit code. Subcommands: gradcheck, analyze, train, schedule-dump.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct GradcheckRow {
  std::uint64_t seed = 0;
  double max_rel_error = 0.0;
  bool skipped = false;  // selector tie: (sub)gradient not defined
  bool passed = false;
};

/// Central-difference check of evaluate(kind, W, lambda) on seeded random
/// rows x cols matrices (entries N(0, 1/rows)). SRIP is checked in exact
/// mode. Inputs whose selector_gap is below `tie_gap` are skipped.
std::vector<GradcheckRow> run_gradcheck(RegKind kind, std::size_t rows, std::size_t cols,
                                        std::uint64_t seeds, double tolerance, double lambda = 0.1,
                                        double h = 1e-6, double tie_gap = 1e-5);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace orthoreg
