#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlsum/chat.hpp"
#include "tlsum/error.hpp"
#include "tlsum/prompts.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

// Sentence -> event atoms. Implementations throw Error(kBackendUnavailable)
// or Error(kUnparseableResponse) on failure.
class Decomposer {
 public:
  virtual ~Decomposer() = default;
  virtual std::string id() const = 0;
  virtual std::vector<EventAtom> decompose(std::string_view sentence) = 0;
};

// Deterministic offline segmentation; never fails on non-empty input.
class RuleBasedDecomposer : public Decomposer {
 public:
  std::string id() const override { return "rule-based"; }
  std::vector<EventAtom> decompose(std::string_view sentence) override;
};

// Sends the decomposition system prompt plus the sentence to a chat model and
// parses the returned string array.
class PromptedDecomposer : public Decomposer {
 public:
  PromptedDecomposer(ChatClient& client, const PromptStore& prompts, std::string template_id = "decompose.system");

  std::string id() const override;
  std::vector<EventAtom> decompose(std::string_view sentence) override;

 private:
  ChatClient& client_;
  std::string system_prompt_;
  std::string template_id_;
};

// Splits at sentence terminators (". ", "! ", "? ", and their CJK forms).
// Terminators stay attached to their sentence.
std::vector<std::string> split_sentences(std::string_view text);

// Clause-level split: ';' and CJK ';'/',' always, and " and " / ", and " when
// the next word opens a new clause (capitalized or a pronoun/determiner).
// Throws Error(kInvalidArgument) on empty input.
std::vector<EventAtom> rule_based_decompose(std::string_view sentence);

// First well-formed JSON array of strings in `text`; surrounding prose is
// ignored and empty strings dropped. Throws Error(kUnparseableResponse).
std::vector<EventAtom> parse_decomposition_response(std::string_view text);

// Keyed by (backend id, whitespace-normalized sentence). Optionally persisted
// as one JSON file per entry under a directory. Concurrent reads, serialized
// writes.
class AtomCache {
 public:
  AtomCache() = default;
  explicit AtomCache(std::filesystem::path dir);

  std::optional<std::vector<EventAtom>> get(const std::string& backend_id, std::string_view sentence) const;
  void put(const std::string& backend_id, std::string_view sentence, const std::vector<EventAtom>& atoms);

  static std::string key(const std::string& backend_id, std::string_view sentence);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, std::vector<std::string>> entries_;
};

struct DecomposePolicy {
  // Degrade to rule-based atoms when the backend fails.
  bool fallback_to_rules = true;
  std::size_t max_concurrency = 4;
};

struct DecomposeOutcome {
  std::vector<EventAtom> atoms;
  bool from_cache = false;
  bool fell_back = false;
  // Error text from the backend when fell_back is set.
  std::string failure;
};

// Cache first, then the backend. Successful backend output is cached; fallback
// output is not.
DecomposeOutcome decompose(std::string_view sentence, Decomposer& backend, AtomCache* cache,
                           const DecomposePolicy& policy);

struct DecomposeStats {
  std::size_t backend_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t fallbacks = 0;

  DecomposeStats& operator+=(const DecomposeStats& o) {
    backend_calls += o.backend_calls;
    cache_hits += o.cache_hits;
    fallbacks += o.fallbacks;
    return *this;
  }
};

struct DecomposedTimeline {
  Timeline timeline;
  Diagnostics diagnostics;
  DecomposeStats stats;
};

// Fills atoms for every node that has none. Identical summaries are sent to
// the backend once. Backend errors propagate with the node index prepended.
DecomposedTimeline decompose_timeline(const Timeline& timeline, Decomposer& backend, AtomCache* cache,
                                      const DecomposePolicy& policy);

struct DecomposedText {
  std::vector<EventAtom> atoms;
  Diagnostics diagnostics;
  DecomposeStats stats;
};

// Atoms of an article: every sentence of every paragraph (the title when the
// article has no paragraphs), in order.
DecomposedText decompose_article(const Article& article, Decomposer& backend, AtomCache* cache,
                                 const DecomposePolicy& policy);

}  // namespace tlsum
