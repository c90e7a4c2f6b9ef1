#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infosum {

std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text) noexcept;

std::optional<double> parse_double(std::string_view text) noexcept;

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

// Fixed 17-significant-digit form.
std::string format_double17(double value);

}  // namespace infosum
