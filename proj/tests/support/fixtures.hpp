#pragma once

#include <random>
#include <string>
#include <vector>

#include "tlsum/types.hpp"

namespace fx {

inline tlsum::Date day(long offset) { return tlsum::Date::from_ymd(2023, 1, 1).plus_days(offset); }

inline tlsum::TimelineNode node(long offset, std::string summary, std::vector<std::string> atoms = {}) {
  return {day(offset), std::move(summary), tlsum::make_atoms(atoms)};
}

// One atom per node, equal to the summary.
inline tlsum::Timeline atomic_timeline(const std::vector<std::pair<long, std::string>>& items,
                                       std::string topic = "t") {
  std::vector<tlsum::TimelineNode> nodes;
  for (const auto& [d, s] : items) nodes.push_back(node(d, s, {s}));
  return tlsum::Timeline(std::move(nodes), std::move(topic));
}

// Level timeline of `count` nodes starting at `first`, `step` days apart.
// Summaries are single clauses unique to (tag, index).
inline tlsum::Timeline level_timeline(const std::string& tag, int count, long first, long step,
                                      bool with_atoms = true) {
  std::vector<tlsum::TimelineNode> nodes;
  for (int i = 0; i < count; ++i) {
    std::string s = "Agency " + tag + " reported finding " + std::to_string(i + 1) + ".";
    nodes.push_back(node(first + i * step, s, with_atoms ? std::vector<std::string>{s} : std::vector<std::string>{}));
  }
  return tlsum::Timeline(std::move(nodes), "topic");
}

// G5 / G10 / GN references on pairwise disjoint dates and atoms, plus one
// article per node quoting its summary on the same date.
inline tlsum::DatasetRecord perfect_record(bool with_atoms = true, std::string id = "topic") {
  tlsum::DatasetRecord r;
  r.topic = {id, "Synthetic topic " + id, tlsum::Category::kPolitics};
  r.reference_timelines.emplace("G5", level_timeline("five", 5, 0, 3, with_atoms));      // days 0,3,...,12
  r.reference_timelines.emplace("G10", level_timeline("ten", 10, 1, 3, with_atoms));     // days 1,4,...,28
  r.reference_timelines.emplace("GN", level_timeline("all", 20, 2, 3, with_atoms));      // days 2,5,...,59
  int a = 0;
  for (const auto& [level, tl] : r.reference_timelines) {
    for (const auto& n : tl.nodes()) {
      tlsum::Article art;
      art.id = "a" + std::to_string(a++);
      art.title = "Report " + art.id;
      art.source = "wire";
      art.publish_date = n.timestamp;
      art.paragraphs = {n.summary};
      r.articles.push_back(art);
    }
  }
  for (auto& [level, tl] : r.reference_timelines) {
    tl.set_topic_id(id);
    tl.set_granularity_label(level);
  }
  return r;
}

inline std::string random_word(std::mt19937& rng) {
  static const char* words[] = {"council", "river", "budget", "storm", "court", "vote", "bridge", "strike",
                                "summit", "market", "harbor", "rally", "treaty", "vaccine", "rocket"};
  return words[std::uniform_int_distribution<int>(0, 14)(rng)];
}

inline std::string random_summary(std::mt19937& rng) {
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += random_word(rng);
  }
  return s;
}

}  // namespace fx
