#include "tlsum/json_extract.hpp"

#include <string>

#include "tlsum/text.hpp"

namespace tlsum {

namespace {

std::string straighten_quotes(std::string_view text) {
  std::string s(text);
  s = text::replace_all(std::move(s), "\xE2\x80\x9C", "\"");  // U+201C
  s = text::replace_all(std::move(s), "\xE2\x80\x9D", "\"");  // U+201D
  return s;
}

// Index one past the bracket closing the one at `start`, honoring JSON strings.
std::size_t match_close(const std::string& s, std::size_t start) {
  const char open = s[start];
  const char close = open == '[' ? ']' : '}';
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == open) {
      ++depth;
    } else if (c == close) {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string::npos;
}

}  // namespace

std::optional<nlohmann::json> find_first_json(std::string_view text, char open,
                                              bool (*accept)(const nlohmann::json&)) {
  const std::string s = straighten_quotes(text);
  for (std::size_t pos = s.find(open); pos != std::string::npos; pos = s.find(open, pos + 1)) {
    const std::size_t end = match_close(s, pos);
    if (end == std::string::npos) continue;
    auto j = nlohmann::json::parse(s.begin() + static_cast<std::ptrdiff_t>(pos),
                                   s.begin() + static_cast<std::ptrdiff_t>(end), nullptr, false);
    if (j.is_discarded()) continue;
    if (accept != nullptr && !accept(j)) continue;
    return j;
  }
  return std::nullopt;
}

}  // namespace tlsum
