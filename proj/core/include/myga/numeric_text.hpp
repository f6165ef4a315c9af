#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace myga {

/// Shortest decimal that parses back to exactly `value`.
std::string format_number(double value);
void append_number(std::string& out, double value);

/// Whole-token parse; nullopt on any trailing characters.
std::optional<double> parse_number(std::string_view token);

}  // namespace myga
