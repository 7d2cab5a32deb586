#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tlsum/date.hpp"
#include "tlsum/error.hpp"

namespace tlsum {

enum class Category { kPolitics, kEconomy, kSociety, kScience, kTechnology, kSports, kEntertainment, kUnknown };

std::string_view to_string(Category c);
// Case-insensitive; anything unrecognized maps to kUnknown.
Category parse_category(std::string_view s);

struct Topic {
  std::string id;
  std::string query;
  Category category = Category::kUnknown;
};

struct Article {
  std::string id;
  std::string title;
  std::string source;
  Date publish_date;
  std::vector<std::string> paragraphs;
};

// One subject-predicate-object clause. Text is stored whitespace-collapsed and
// must be non-empty.
class EventAtom {
 public:
  explicit EventAtom(std::string_view text);

  const std::string& text() const { return text_; }
  bool operator==(const EventAtom&) const = default;

 private:
  std::string text_;
};

std::vector<EventAtom> make_atoms(const std::vector<std::string>& texts);
std::vector<std::string> atom_texts(const std::vector<EventAtom>& atoms);

struct TimelineNode {
  Date timestamp;
  std::string summary;
  std::vector<EventAtom> atoms;

  bool decomposed() const { return !atoms.empty(); }
  bool operator==(const TimelineNode&) const = default;
};

// Ordered, date-unique sequence of nodes with at least one node. Construction
// normalizes: nodes are stably sorted by date and same-date nodes are merged
// (summaries joined with one space, atoms concatenated).
class Timeline {
 public:
  explicit Timeline(std::vector<TimelineNode> nodes, std::string topic_id = {},
                    std::optional<std::string> granularity_label = std::nullopt,
                    std::vector<Date>* merged_dates = nullptr);

  const std::vector<TimelineNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const TimelineNode& operator[](std::size_t i) const { return nodes_[i]; }

  const std::string& topic_id() const { return topic_id_; }
  const std::optional<std::string>& granularity_label() const { return label_; }
  void set_topic_id(std::string id) { topic_id_ = std::move(id); }
  void set_granularity_label(std::optional<std::string> label) { label_ = std::move(label); }

  bool fully_decomposed() const;
  std::size_t atom_count() const;
  std::vector<Date> dates() const;

  // Replaces the atoms of node i; the timestamp and summary are untouched.
  void set_atoms(std::size_t i, std::vector<EventAtom> atoms);

  bool operator==(const Timeline&) const = default;

 private:
  std::vector<TimelineNode> nodes_;
  std::string topic_id_;
  std::optional<std::string> label_;
};

struct NodeCount {
  int n = 1;
};

enum class InstructionStyle { kFine, kCoarse };

struct PromptInstruction {
  InstructionStyle style = InstructionStyle::kFine;
};

struct OneShotExemplar {
  Timeline exemplar;
};

using GranularitySpec = std::variant<NodeCount, PromptInstruction, OneShotExemplar>;

// Throws kInvalidArgument for NodeCount < 1.
void validate(const GranularitySpec& spec);

// Granularity level names: "GN", "G10", "G5", or any "G<k>".
std::string canonical_level(std::string_view level);
// Node count implied by a "G<k>" name; nullopt for "GN".
std::optional<int> level_node_count(std::string_view level);
// GN, G10, G5 first, then remaining levels by descending node count.
std::vector<std::string> ordered_levels(const std::vector<std::string>& levels);

struct DatasetRecord {
  Topic topic;
  std::map<std::string, Timeline> reference_timelines;
  std::vector<Article> articles;

  const Timeline* reference(std::string_view level) const;
  std::map<std::string, std::size_t> node_counts() const;
  std::vector<std::string> levels() const;
};

struct AtomGroup {
  int group_id = 0;
  Date timestamp;
  std::vector<EventAtom> atoms;
};

std::string group_label(int group_id);

}  // namespace tlsum
