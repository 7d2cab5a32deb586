#include "tlsum/timeline_text.hpp"

#include <regex>

#include "tlsum/text.hpp"

namespace tlsum {

namespace {
const std::regex& line_pattern() {
  static const std::regex re(R"(^\s*(\d+)\.\s*(\d{4}-\d{1,2}-\d{1,2})\s*:\s*(.*)$)");
  return re;
}
}  // namespace

ParsedTimeline parse_timeline_text(std::string_view text) {
  std::vector<TimelineNode> nodes;
  Diagnostics skipped;
  const auto lines = text::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(i + 1);
    std::smatch m;
    if (!std::regex_match(line, m, line_pattern())) {
      skipped.push_back({"skipped_line", where + ": not a timeline entry: " + line});
      continue;
    }
    const auto date = Date::parse(m[2].str());
    if (!date) {
      skipped.push_back({"invalid_date", where + ": invalid date '" + m[2].str() + "'"});
      continue;
    }
    std::string summary = text::trim(m[3].str());
    if (summary.empty()) {
      skipped.push_back({"skipped_line", where + ": empty summary"});
      continue;
    }
    nodes.push_back({*date, std::move(summary), {}});
  }
  if (nodes.empty()) throw Error(ErrorCode::kNoValidNodes, "no line matched 'k. yyyy-mm-dd: summary'");
  std::vector<Date> merged;
  Timeline tl(std::move(nodes), {}, std::nullopt, &merged);
  return ParsedTimeline{std::move(tl), std::move(skipped), std::move(merged)};
}

std::string serialize_timeline(const Timeline& timeline) {
  std::string out;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto& node = timeline[i];
    if (i > 0) out.push_back('\n');
    out += std::to_string(i + 1);
    out += ". ";
    out += node.timestamp.to_string();
    out += ": ";
    out += text::collapse_whitespace(node.summary);
  }
  return out;
}

}  // namespace tlsum
