#include "tlsum/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "tlsum/json_extract.hpp"
#include "tlsum/timeline_text.hpp"

namespace tlsum {

namespace {

bool is_object(const nlohmann::json& j) { return j.is_object(); }

std::optional<int> as_score(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::floor(d) != d) return std::nullopt;
    return static_cast<int>(d);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    return std::stoi(s);
  }
  return std::nullopt;
}

// Accepts {"score": n, "rationale": "..."} or a bare number.
std::pair<int, std::string> read_rating(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) throw Error(ErrorCode::kUnparseableResponse, std::string("review lacks '") + key + "'");
  const auto& v = obj.at(key);
  std::optional<int> score;
  std::string rationale;
  if (v.is_object()) {
    if (v.contains("score")) score = as_score(v.at("score"));
    if (v.contains("rationale") && v.at("rationale").is_string()) rationale = v.at("rationale").get<std::string>();
  } else {
    score = as_score(v);
  }
  if (!score) throw Error(ErrorCode::kUnparseableResponse, std::string("'") + key + "' has no integer score");
  return {*score, std::move(rationale)};
}

int clamp_score(int score, int lo, int hi, const char* aspect, Diagnostics* diagnostics) {
  const int clamped = std::clamp(score, lo, hi);
  if (clamped != score) {
    add_diagnostic(diagnostics, "score_clamped",
                   std::string(aspect) + " score " + std::to_string(score) + " clamped to " + std::to_string(clamped));
  }
  return clamped;
}

}  // namespace

double normalize_overall(int overall) { return static_cast<double>(overall - 1) / 4.0 * 100.0; }

CoherenceReport parse_coherence_response(std::string_view response, Diagnostics* diagnostics) {
  auto j = find_first_json(response, '{', &is_object);
  if (!j) throw Error(ErrorCode::kUnparseableResponse, "no JSON object in judge response");
  CoherenceReport r;
  if (j->contains("paraphrase") && j->at("paraphrase").is_string()) r.paraphrase = j->at("paraphrase").get<std::string>();
  auto [s, s_why] = read_rating(*j, "structural");
  auto [l, l_why] = read_rating(*j, "linguistic");
  auto [st, st_why] = read_rating(*j, "style");
  auto [o, o_why] = read_rating(*j, "overall");
  r.structural = {clamp_score(s, 1, 3, "structural", diagnostics), std::move(s_why)};
  r.linguistic = {clamp_score(l, 1, 3, "linguistic", diagnostics), std::move(l_why)};
  r.style = {clamp_score(st, 1, 3, "style", diagnostics), std::move(st_why)};
  r.overall = clamp_score(o, 1, 5, "overall", diagnostics);
  r.overall_rationale = std::move(o_why);
  r.normalized = normalize_overall(r.overall);
  return r;
}

std::optional<CoherenceReport> coherence(const Timeline& timeline, ChatClient& judge, const PromptStore& prompts,
                                         const CoherenceOptions& options, Diagnostics* diagnostics) {
  ChatRequest req;
  req.job_id = "coherence:" + timeline.topic_id();
  req.system = prompts.get("coherence.system");
  const std::string examples = options.exemplars.empty() ? "" : "[Examples]\n" + options.exemplars + "\n\n";
  req.user = fill_template(prompts.get("coherence.user"), {{"EXAMPLES", examples}, {"TIMELINE", serialize_timeline(timeline)}});
  const std::string base_user = req.user;

  const int attempts = 1 + std::max(0, options.max_reprompts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::string response;
    try {
      response = judge.complete(req);
    } catch (const Error& e) {
      add_diagnostic(diagnostics, "coherence_failed", e.what());
      return std::nullopt;
    }
    try {
      return parse_coherence_response(response, diagnostics);
    } catch (const Error& e) {
      add_diagnostic(diagnostics, "coherence_unparseable",
                     "attempt " + std::to_string(attempt) + ": " + e.what());
    }
    req.user = base_user +
               "\n\nYour previous reply could not be parsed. Reply with only the JSON object described in the "
               "instructions.";
  }
  add_diagnostic(diagnostics, "coherence_undefined", "no parseable review after " + std::to_string(attempts) + " attempts");
  return std::nullopt;
}

}  // namespace tlsum
