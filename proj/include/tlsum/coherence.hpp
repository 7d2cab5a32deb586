#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tlsum/chat.hpp"
#include "tlsum/error.hpp"
#include "tlsum/prompts.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

struct AspectRating {
  int score = 1;  // 1..3
  std::string rationale;
};

struct CoherenceReport {
  std::string paraphrase;
  AspectRating structural;
  AspectRating linguistic;
  AspectRating style;
  int overall = 1;  // 1..5
  std::string overall_rationale;
  double normalized = 0.0;  // (overall - 1) / 4 * 100
};

// Linear map of the 1-5 overall score onto [0, 100].
double normalize_overall(int overall);

struct CoherenceOptions {
  // Expert-annotated review examples placed ahead of the timeline.
  std::string exemplars;
  int max_reprompts = 2;
};

// Parses the judge's JSON review. Out-of-range scores are clamped with a
// "score_clamped" diagnostic. Throws Error(kUnparseableResponse).
CoherenceReport parse_coherence_response(std::string_view response, Diagnostics* diagnostics = nullptr);

// Runs the review form against `judge`. Unparseable replies are re-prompted
// up to options.max_reprompts times; after that, or on a judge failure, the
// result is nullopt with a diagnostic.
std::optional<CoherenceReport> coherence(const Timeline& timeline, ChatClient& judge, const PromptStore& prompts,
                                         const CoherenceOptions& options = {}, Diagnostics* diagnostics = nullptr);

}  // namespace tlsum
