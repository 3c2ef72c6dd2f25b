#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lqo {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Strict parse of a whole field; throws std::invalid_argument otherwise.
double parse_double(std::string_view text);

/// Splits one CSV line on commas (no quoting; all our files are numeric).
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace lqo
