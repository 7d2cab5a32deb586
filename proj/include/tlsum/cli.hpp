#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "tlsum/metrics.hpp"
#include "tlsum/remote.hpp"

namespace tlsum {

struct RunConfig {
  std::size_t workers = 4;
  std::size_t decompose_concurrency = 4;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::size_t> length_budget;
  std::size_t fan_in = 4;
  bool recursive_merge = false;
  std::size_t support_k = 5;
  bool fallback_to_rules = true;
  int max_attempts = 3;
  std::optional<std::filesystem::path> prompt_dir;
  std::string language = "en";
  std::string decomposer = "rule-based";  // or "prompted"
  std::string entailment = "exact-match";  // or "nli"
  PremiseMode nli_premise_mode = PremiseMode::kJoinedAtoms;
  GranuDenominator granu_denominator = GranuDenominator::kPredictedEdges;
  std::optional<std::filesystem::path> coherence_exemplars;
};

// Unknown keys, out-of-range values and anything that looks like a credential
// throw Error(kConfig). Credentials come from the environment only.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// Exit codes: 0 success (possibly partial), 1 input error, 2 nothing produced.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tlsum
