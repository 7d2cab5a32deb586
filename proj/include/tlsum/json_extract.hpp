#pragma once

#include <optional>
#include <string_view>

#include <json.hpp>

namespace tlsum {

// Returns the first balanced `[...]` (open = '[') or `{...}` (open = '{')
// span in `text` that parses as JSON and satisfies `accept`. Typographic
// double quotes are treated as ASCII quotes.
std::optional<nlohmann::json> find_first_json(std::string_view text, char open,
                                              bool (*accept)(const nlohmann::json&) = nullptr);

}  // namespace tlsum
