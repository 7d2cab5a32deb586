#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tlsum/error.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

struct ParsedTimeline {
  Timeline timeline;
  // One entry per input line that did not yield a node (code "skipped_line"
  // or "invalid_date").
  Diagnostics skipped;
  // Dates where two or more parsed lines were merged into one node.
  std::vector<Date> merged_dates;
};

// Parses `<index>. <yyyy-mm-dd>: <summary>` lines. Lines starting with '#' are
// comments and are ignored silently. Throws Error(kNoValidNodes) when no line
// yields a node.
ParsedTimeline parse_timeline_text(std::string_view text);

// Numbered `k. yyyy-mm-dd: summary` lines joined by '\n', without a trailing
// newline. Newlines inside summaries are folded to spaces.
std::string serialize_timeline(const Timeline& timeline);

}  // namespace tlsum
