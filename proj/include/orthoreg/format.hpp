#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace orthoreg {

/// Shortest decimal form that round-trips to the same double ("0.001",
/// "1e-06", "nan"). Used for every number written to CSV or text output.
std::string format_double(double x);

/// Parses a whole string as a double; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace orthoreg
