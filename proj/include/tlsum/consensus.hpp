#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tlsum/chat.hpp"
#include "tlsum/error.hpp"
#include "tlsum/prompts.hpp"
#include "tlsum/timeline_text.hpp"
#include "tlsum/types.hpp"

namespace tlsum {

// Numbered 1, 2, 3 in agreement tables.
enum class Role { kNewsEditor, kJournalist, kNlpResearcher };

inline constexpr std::array<Role, 3> kRoles{Role::kNewsEditor, Role::kJournalist, Role::kNlpResearcher};

// "news_editor", "journalist", "nlp_researcher"; also the prompt key infix.
std::string_view to_string(Role r);
Role parse_role(std::string_view s);
int role_number(Role r);

struct RoleSelection {
  Role role = Role::kNewsEditor;
  std::vector<int> selected;  // group ids, response order
  Diagnostics diagnostics;
  std::size_t model_calls = 0;
};

struct RoleSelectOptions {
  std::string example;  // example annotation shown in the role prompt
  int max_repads = 2;
};

// Groups as a JSON object {"Group_<id>": {"date": ..., "atoms": [...]}}.
std::string render_groups(std::span<const AtomGroup> groups);

// Group ids from the first JSON array in `response` (or the first array
// inside the first object). Entries may be "Group_3", "Group 3", "3" or 3.
// Unresolvable entries are returned as -1. Throws Error(kUnparseableResponse).
std::vector<int> parse_group_references(std::string_view response);

// Asks the role for the top-N groups. Unknown and duplicate ids are dropped,
// extra ids truncated, each with a diagnostic; short selections are re-prompted
// up to options.max_repads times. Throws Error(kInsufficientGroups) when there
// are fewer than N groups and Error(kPadFailure) when still short.
RoleSelection role_select(std::span<const AtomGroup> groups, Role role, std::size_t n, const Topic& topic,
                          ChatClient& client, const PromptStore& prompts, const RoleSelectOptions& options = {});

enum class Provenance { kThreeVote, kTwoVote, kFill };
std::string_view to_string(Provenance p);

struct ConsensusResult {
  std::vector<int> final;  // ascending group id
  std::map<int, Provenance> provenance;
};

// Three-vote groups first, then two-vote, then one-vote fills, each tier
// ranked by atom count (desc), timestamp (asc), id (asc), cut at N. Throws
// Error(kInsufficientGroups) when the universe has fewer than N groups and
// Error(kInvalidArgument) unless given exactly three selections over known ids.
ConsensusResult consensus_merge(std::span<const AtomGroup> groups, std::span<const RoleSelection> selections,
                                std::size_t n);

struct AgreementStats {
  std::size_t full = 0;
  std::size_t partial_12 = 0;
  std::size_t partial_13 = 0;
  std::size_t partial_23 = 0;
  std::size_t none = 0;

  std::size_t total() const { return full + partial_12 + partial_13 + partial_23 + none; }
  bool operator==(const AgreementStats&) const = default;
};

// Buckets every group picked by at least one role by which roles picked it.
// Throws Error(kInvalidArgument) unless the three roles are distinct.
AgreementStats agreement_stats(std::span<const RoleSelection> selections);

// "Full Agreement 3118 45.09%" style lines, one per bucket.
std::string render_agreement_table(const AgreementStats& stats);

struct ConsensusRun {
  std::vector<RoleSelection> selections;  // kRoles order
  ConsensusResult result;
  AgreementStats stats;
};

// The three role selections (concurrently), then merge and statistics.
ConsensusRun run_consensus(std::span<const AtomGroup> groups, std::size_t n, const Topic& topic, ChatClient& client,
                           const PromptStore& prompts, const RoleSelectOptions& options = {},
                           std::size_t workers = 3);

nlohmann::json to_json(const ConsensusRun& run);

// Comment block listing the chosen groups and their atoms, followed by an
// empty "k. yyyy-mm-dd: " line per group for the expert to complete.
std::string write_edit_file(const Topic& topic, std::span<const AtomGroup> groups, const ConsensusResult& result);

// Parses a completed edit file; lines left empty are reported as skipped.
ParsedTimeline read_edit_file(std::string_view text);

}  // namespace tlsum
