#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace amuse::csv {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_exact(double value);

/// 12 significant digits; the fixed precision used by every emitted report.
std::string format_report(double value);

/// Splits on ',' without quoting support; surrounding blanks are trimmed.
std::vector<std::string_view> split(std::string_view line);

/// Strict full-field parse; returns false on trailing garbage or empty input.
bool parse_double(std::string_view field, double& out);

}  // namespace amuse::csv
