#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bayestrust::text {

/// 17 significant digits ("%.17g"): fixed-width, byte-stable and lossless.
std::string format_real(double value);
/// Shortest text that parses back to the same double ("0.8", not "0.80000000000000004").
std::string format_shortest(double value);

/// Whole-string parses; nullopt on trailing garbage, overflow or empty input.
std::optional<double> parse_real(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char delimiter);
/// Splits on runs of spaces/tabs, dropping empty fields.
std::vector<std::string_view> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);

}  // namespace bayestrust::text
