#include "tlsum/types.hpp"

#include <algorithm>
#include <charconv>

#include "tlsum/text.hpp"

namespace tlsum {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kPolitics: return "Politics";
    case Category::kEconomy: return "Economy";
    case Category::kSociety: return "Society";
    case Category::kScience: return "Science";
    case Category::kTechnology: return "Technology";
    case Category::kSports: return "Sports";
    case Category::kEntertainment: return "Entertainment";
    case Category::kUnknown: return "Unknown";
  }
  return "Unknown";
}

Category parse_category(std::string_view s) {
  const std::string lower = text::ascii_lower(text::trim(s));
  for (auto c : {Category::kPolitics, Category::kEconomy, Category::kSociety, Category::kScience,
                 Category::kTechnology, Category::kSports, Category::kEntertainment}) {
    if (text::ascii_lower(to_string(c)) == lower) return c;
  }
  return Category::kUnknown;
}

EventAtom::EventAtom(std::string_view text) : text_(text::collapse_whitespace(text)) {
  if (text_.empty()) throw Error(ErrorCode::kInvalidArgument, "event atom is empty");
}

std::vector<EventAtom> make_atoms(const std::vector<std::string>& texts) {
  std::vector<EventAtom> atoms;
  atoms.reserve(texts.size());
  for (const auto& t : texts) atoms.emplace_back(t);
  return atoms;
}

std::vector<std::string> atom_texts(const std::vector<EventAtom>& atoms) {
  std::vector<std::string> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(a.text());
  return out;
}

Timeline::Timeline(std::vector<TimelineNode> nodes, std::string topic_id,
                   std::optional<std::string> granularity_label, std::vector<Date>* merged_dates)
    : topic_id_(std::move(topic_id)), label_(std::move(granularity_label)) {
  if (nodes.empty()) throw Error(ErrorCode::kInvalidTimeline, "a timeline needs at least one node");
  for (auto& n : nodes) {
    n.summary = text::trim(n.summary);
    if (n.summary.empty()) {
      throw Error(ErrorCode::kInvalidTimeline, "empty summary at " + n.timestamp.to_string());
    }
  }
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const TimelineNode& a, const TimelineNode& b) { return a.timestamp < b.timestamp; });
  nodes_.reserve(nodes.size());
  for (auto& n : nodes) {
    if (!nodes_.empty() && nodes_.back().timestamp == n.timestamp) {
      auto& prev = nodes_.back();
      prev.summary += ' ';
      prev.summary += n.summary;
      prev.atoms.insert(prev.atoms.end(), n.atoms.begin(), n.atoms.end());
      if (merged_dates != nullptr && (merged_dates->empty() || merged_dates->back() != n.timestamp)) {
        merged_dates->push_back(n.timestamp);
      }
      continue;
    }
    nodes_.push_back(std::move(n));
  }
}

bool Timeline::fully_decomposed() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const TimelineNode& n) { return n.decomposed(); });
}

std::size_t Timeline::atom_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) n += node.atoms.size();
  return n;
}

std::vector<Date> Timeline::dates() const {
  std::vector<Date> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.timestamp);
  return out;
}

void Timeline::set_atoms(std::size_t i, std::vector<EventAtom> atoms) { nodes_.at(i).atoms = std::move(atoms); }

void validate(const GranularitySpec& spec) {
  if (const auto* nc = std::get_if<NodeCount>(&spec); nc != nullptr && nc->n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "node count must be at least 1");
  }
}

std::string canonical_level(std::string_view level) {
  std::string out;
  for (char c : text::trim(level)) {
    if (c == '_') continue;
    out.push_back(c == 'g' ? 'G' : (c == 'n' ? 'N' : c));
  }
  return out;
}

std::optional<int> level_node_count(std::string_view level) {
  const std::string canon = canonical_level(level);
  if (canon.size() < 2 || canon[0] != 'G') return std::nullopt;
  int value = 0;
  const char* first = canon.data() + 1;
  const char* last = canon.data() + canon.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 1) return std::nullopt;
  return value;
}

std::vector<std::string> ordered_levels(const std::vector<std::string>& levels) {
  std::vector<std::string> out = levels;
  auto rank = [](const std::string& l) -> std::pair<int, int> {
    if (l == "GN") return {0, 0};
    if (l == "G10") return {1, 0};
    if (l == "G5") return {2, 0};
    const auto n = level_node_count(l);
    return {3, n ? -*n : 0};
  };
  std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    const auto ra = rank(a);
    const auto rb = rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
  });
  return out;
}

const Timeline* DatasetRecord::reference(std::string_view level) const {
  auto it = reference_timelines.find(canonical_level(level));
  return it == reference_timelines.end() ? nullptr : &it->second;
}

std::map<std::string, std::size_t> DatasetRecord::node_counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& [level, tl] : reference_timelines) out[level] = tl.size();
  return out;
}

std::vector<std::string> DatasetRecord::levels() const {
  std::vector<std::string> out;
  for (const auto& [level, tl] : reference_timelines) out.push_back(level);
  return ordered_levels(out);
}

std::string group_label(int group_id) { return "Group_" + std::to_string(group_id); }

}  // namespace tlsum
