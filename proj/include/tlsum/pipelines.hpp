#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlsum/chat.hpp"
#include "tlsum/error.hpp"
#include "tlsum/prompts.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

enum class Method { kLP, kHM, kTO };

std::string_view to_string(Method m);
// "lp", "hm", "to" (case-insensitive). Throws Error(kInvalidArgument).
Method parse_method(std::string_view s);

struct GenerationJob {
  std::string job_id;
  Method method = Method::kLP;
  bool gold_timestamps = false;
  std::vector<Date> gold_dates;  // filled by apply_gold_timestamps
  GranularitySpec granularity = NodeCount{10};
  Topic topic;
  std::vector<Article> articles;
  std::string model;
  // In units of PipelineConfig::length; nullopt disables truncation.
  std::optional<std::size_t> length_budget;
};

using LengthFn = std::function<std::size_t(std::string_view)>;

struct PipelineConfig {
  LengthFn length;  // empty = UTF-8 code points
  std::size_t fan_in = 4;
  // Keep regrouping intermediate merges by fan_in until one group is left,
  // instead of a single final merge over all first-level outputs.
  bool recursive_merge = false;
  std::size_t max_concurrency = 4;
  PromptStore prompts;
};

struct GenerationResult {
  Timeline timeline;
  Diagnostics diagnostics;
  std::size_t model_calls = 0;
};

// Task prompt with the granularity instruction applied. NodeCount fills {N}
// (adding the count note when the template lacks it); the other styles drop
// the count note, prefix their instruction and fill {N} with a literal "N".
std::string render_granularity_instruction(const GranularitySpec& spec, std::string_view task_template,
                                           const PromptStore& prompts);

std::size_t article_length(const Article& article, const LengthFn& length);

// Drops the last paragraph of the currently longest article (lowest index on
// ties) until the total fits. Titles are never removed. Throws
// Error(kInvalidArgument) for a zero budget and Error(kBudgetTooSmall) when
// the titles alone exceed it.
std::vector<Article> truncate_articles(std::vector<Article> articles, std::size_t budget, const LengthFn& length = {});

// "[Article i]" blocks with title, release time and content.
std::string render_articles(const std::vector<Article>& articles);

GenerationResult lp_generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config = {});

struct DaySummaries {
  std::vector<Timeline> partials;  // batch order (by date)
  Diagnostics diagnostics;
  std::size_t model_calls = 0;
};

// One call per publish-date batch; batches over budget are split. Failed
// batches are skipped with a "batch_failed" diagnostic.
DaySummaries hm_day_summaries(const GenerationJob& job, ChatClient& client, const PipelineConfig& config = {});

// Model calls hm_merge issues for p partials.
std::size_t expected_merge_calls(std::size_t partials, std::size_t fan_in, bool recursive = false);

GenerationResult hm_merge(const std::vector<Timeline>& partials, const GenerationJob& job, ChatClient& client,
                          const PipelineConfig& config = {});

// Day summaries followed by hm_merge. Throws Error(kNoValidNodes) when every
// batch failed.
GenerationResult hm_generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config = {});

// Topic and instruction only. Throws Error(kInvalidArgument) if the job
// carries articles.
GenerationResult to_generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config = {});

// Copies the reference dates into the job. Throws Error(kMissingReference)
// when reference is null.
GenerationJob apply_gold_timestamps(GenerationJob job, const Timeline* reference);

// Dispatch on job.method.
GenerationResult generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config = {});

}  // namespace tlsum
