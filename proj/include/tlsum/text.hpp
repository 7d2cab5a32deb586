#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tlsum::text {

std::string trim(std::string_view s);

// Trims and collapses every run of ASCII whitespace into a single space.
std::string collapse_whitespace(std::string_view s);

std::string ascii_lower(std::string_view s);

bool starts_with_upper(std::string_view s);

// Number of UTF-8 code points; invalid bytes count as one each.
std::size_t utf8_length(std::string_view s);

// FNV-1a, stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 14695981039346656037ULL);

std::string hex64(std::uint64_t v);

std::vector<std::string> split_lines(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Replaces every occurrence of `from` in `s` with `to`.
std::string replace_all(std::string s, std::string_view from, std::string_view to);

}  // namespace tlsum::text
