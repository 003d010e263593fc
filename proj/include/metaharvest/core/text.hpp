#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace metaharvest {

/// Decodes `bytes` as UTF-8, replacing every invalid sequence with U+FFFD.
[[nodiscard]] auto sanitize_utf8(std::string_view bytes) -> std::string;

/// Appends the UTF-8 encoding of `code_point` (U+FFFD when not a scalar value).
void append_utf8(std::string& out, char32_t code_point);

/// Number of code points in valid UTF-8 text.
[[nodiscard]] auto utf8_length(std::string_view text) -> std::size_t;

/// Prefix of valid UTF-8 `text` holding at most `max_chars` code points.
[[nodiscard]] auto utf8_prefix(std::string_view text, std::size_t max_chars) -> std::string_view;

[[nodiscard]] inline auto is_space(char c) -> bool
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

[[nodiscard]] auto trim(std::string_view s) -> std::string_view;
[[nodiscard]] auto to_lower_ascii(std::string_view s) -> std::string;
[[nodiscard]] auto iequals(std::string_view a, std::string_view b) -> bool;
[[nodiscard]] auto istarts_with(std::string_view s, std::string_view prefix) -> bool;

/// Collapses every whitespace run to one space and trims both ends.
[[nodiscard]] auto collapse_whitespace(std::string_view s) -> std::string;

[[nodiscard]] auto split_lines(std::string_view s) -> std::vector<std::string_view>;

[[nodiscard]] auto join(const std::vector<std::string>& parts, std::string_view sep) -> std::string;

/// ISO-8601 UTC timestamp with second precision, e.g. "2025-06-07T12:00:00Z".
[[nodiscard]] auto format_utc(std::chrono::system_clock::time_point tp) -> std::string;

[[nodiscard]] auto read_file(const std::string& path) -> std::string;

}  // namespace metaharvest
