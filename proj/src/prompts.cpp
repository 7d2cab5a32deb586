#include "tlsum/prompts.hpp"

#include <fstream>
#include <sstream>

#include "tlsum/error.hpp"

namespace tlsum {

namespace {

const char* kDecomposeSystem = R"(You are a Fact Decomposer.
## Your task is:
As a specialized journalist, you will be provided with a sentence that may describe multiple events.
Your task is to decompose the sentence into atomic propositions. An atomic proposition consists of,
and only of, a subject, a predicate, and an object.
## Output format:
Please use the following format for your output:
["Atom_1", "Atom_2", ...]
## Example:
Here is an example for you to better understand the task:
Input: "Myanmar military: one-year state of emergency imposed"
Output: ["Myanmar military imposes state of emergency", "State of emergency lasts for one year"])";

const char* kLpSystem = R"(You are a News Event Timeline Generator.
## Your task is:
As a specialized journalist, you will be provided with a news [topic] and related news [articles].
Based on this information, construct a chronologically ordered timeline summarizing the key events of the [topic].
Each event summary should be accompanied by an accurate timestamp.
## Output format:
Please use the following format for your output:
1. yyyy-mm-dd: Event summary 1
2. yyyy-mm-dd: Event summary 2
...
{N}. yyyy-mm-dd: Event summary {N}
## Note:
- The timeline should contain at least {N} event summaries.
- The summary content must match the timestamp.
- It's important to select key events to build the timeline, as not all [articles] are worth summarizing.)";

const char* kToSystem = R"(You are a News Event Timeline Generator.
## Your task is:
As a specialized journalist, you will be provided with a news [topic].
Based on your knowledge, construct a chronologically ordered timeline summarizing the key events of the [topic].
Each event summary should be accompanied by an accurate timestamp.
## Output format:
Please use the following format for your output:
1. yyyy-mm-dd: Event summary 1
2. yyyy-mm-dd: Event summary 2
...
{N}. yyyy-mm-dd: Event summary {N}
## Note:
- The timeline should contain at least {N} event summaries.
- The summary content must match the timestamp.)";

const char* kHmDaySystem = R"(You are a News Event Timeline Generator.
## Your task is:
As a specialized journalist, you will be provided with a news [topic] and related news [articles]. Based on this information,
construct a chronologically ordered timeline summarizing the key events of the [topic]. Each event summary should be
accompanied by an accurate timestamp.
## Output format:
Please use the following format for your output:
1. yyyy-mm-dd: Event summary 1
2. yyyy-mm-dd: Event summary 2
...
{N}. yyyy-mm-dd: Event summary {N}
## Note:
- There can only be ONE event summary per day.
- It's important to select key events to build the timeline, as not all [articles] are worth summarizing.)";

const char* kHmMergeSystem = R"(You are a News Event Timeline Generator.
## Your task is:
As a specialized journalist, you will be provided with a news [topic], multiple partially completed timelines. Based on
this information, merge the timelines to create a chronologically ordered timeline summarizing the key events of the [topic].
## Output format:
Please use the following format for your output:
1. yyyy-mm-dd: Event summary 1
2. yyyy-mm-dd: Event summary 2
...
{N}. yyyy-mm-dd: Event summary {N}
## Note:
- There can only be ONE event summary per day.
- It's important to select key events to build the timeline, as not all events are worth summarizing.)";

const char* kCountNote = "- The timeline should contain at least {N} event summaries.";

const char* kGoldNote = "- Use exactly these dates, one event summary per date: {DATES}";

const char* kCoherenceSystem = R"(You are an expert reviewer of news timelines. You assess the coherence of a timeline
summary the way a conference reviewer fills in a review form.

A timeline is a chronologically ordered list of dated event summaries. Coherence has three aspects:
- Structural coherence: nodes follow a clear chronological order, each node covers one event of its date,
  and the sequence forms a connected storyline without gaps, repetitions, or misplaced events.
- Linguistic coherence: each summary is fluent and grammatical, references (names, pronouns, abbreviations)
  are resolvable from the timeline itself, and wording is consistent across nodes.
- Style coherence: all summaries share a consistent, objective news register, comparable length and tense,
  and no node switches voice, format, or perspective.

Review in three steps:
1. Paraphrase the timeline in a few sentences to show your understanding.
2. Rate each aspect from 1 to 3 (1 = major problems, 2 = minor problems, 3 = no problems) and explain the rationale.
3. Give an overall score from 1 to 5 (1 = incoherent, 3 = acceptable, 5 = fully coherent).

Respond with one JSON object and nothing else:
{"paraphrase": "...",
 "structural": {"score": 1-3, "rationale": "..."},
 "linguistic": {"score": 1-3, "rationale": "..."},
 "style": {"score": 1-3, "rationale": "..."},
 "overall": {"score": 1-5, "rationale": "..."}})";

const char* kCoherenceUser = R"({EXAMPLES}[Timeline]
{TIMELINE})";

const char* kConsensusEditorSystem =
    R"(You are a specialized news editor. Your response should be in JSON format, start with "{" and end with "}".)";
const char* kConsensusJournalistSystem =
    R"(You are a specialized journalist. Your response should be in JSON format, start with "{" and end with "}".)";
const char* kConsensusResearcherSystem =
    R"(You are a specialized NLP researcher. Your response should be in JSON format, start with "{" and end with "}".)";

const char* kConsensusEditorInput = R"(Given the event atom groups derived from the original timeline, your task is to select the most critical event groups that
should be included in a condensed timeline. As a News Editor, focus on the following metrics:
- Inclusive: The selected event groups should maximize the coverage of key events, ensuring that the most newsworthy and
impactful events are included.
- Accurate: The selected event groups must accurately reflect the essential developments without adding any ambiguity or
misinformation.
- Traceable: Ensure each selected event group can be directly traced back to the original timeline, maintaining the integrity
and source of information.
Please select the top {N} event atom groups according to the [Input]. Your response must follow the [Template].
[Example]
{EXAMPLE}
[Template]
["Group_1", "Group_2", ..., "Group_{N}"] # Selected Event Atom Groups.
[Input]
Topic: {TOPIC}
Event Atom Groups: {GROUPS})";

const char* kConsensusJournalistInput = R"(Given the event atom groups derived from the original timeline, your task is to select the most newsworthy event groups that
should be included in a condensed timeline. As a News Editor, focus on the following metrics:
- Insightfulness: Focus on selecting event atom groups that offer deep insights into the topic, providing the audience with a
comprehensive understanding of the events' context and implications.
- Objectivity: Ensure the selected groups are presented in an unbiased manner, maintaining journalistic integrity by avoiding
sensationalism or subjective interpretation.
- Relevance: Select event atom groups that are most relevant to the central theme or story, ensuring that the timeline remains
focused and cohesive.
Please select the top {N} event atom groups according to the [Input]. Your response must follow the [Template].
[Example]
{EXAMPLE}
[Template]
["Group_1", "Group_2", ..., "Group_{N}"] # Selected Event Atom Groups.
[Input]
Topic: {TOPIC}
Event Atom Groups: {GROUPS})";

const char* kConsensusResearcherInput = R"(Given the event atom groups derived from the original timeline, your task is to select the most comprehensive event groups
that should be included in a condensed timeline. As an NLP researcher, focus on the following metrics:
- Comprehensiveness: Ensure that the selected event atom groups provide broad and detailed coverage of the original
timeline, capturing all significant events and nuances.
- Accuracy: Focus on selecting event atom groups that are factually correct, with a high level of precision in how the events
are described, avoiding any distortion of the original data.
- Reproducibility: Prioritize event atom groups that can be easily traced back to the original data, ensuring that the selections
are well-documented and can be verified by others.
Please select the top {N} event atom groups according to the [Input]. Your response must follow the [Template].
[Example]
{EXAMPLE}
[Template]
["Group_1", "Group_2", ..., "Group_{N}"] # Selected Event Atom Groups.
[Input]
Topic: {TOPIC}
Event Atom Groups: {GROUPS})";

const char* kConsensusRepad = R"(Your previous answer contained only {HAVE} valid, distinct groups: {KEPT}.
Select {MISSING} more groups from the [Input] that are not already listed, using the same [Template].)";

}  // namespace

const std::map<std::string, std::string, std::less<>>& PromptStore::builtin() {
  static const std::map<std::string, std::string, std::less<>> templates = {
      {"decompose.system", kDecomposeSystem},
      {"lp.system", kLpSystem},
      {"to.system", kToSystem},
      {"hm.day.system", kHmDaySystem},
      {"hm.merge.system", kHmMergeSystem},
      {"count.note", kCountNote},
      {"gt.note", kGoldNote},
      {"granularity.coarse", "Please generate a coarse-grained timeline."},
      {"granularity.fine", "Please generate a fine-grained timeline."},
      {"granularity.oneshot", "Please generate a timeline like:"},
      {"coherence.system", kCoherenceSystem},
      {"coherence.user", kCoherenceUser},
      {"consensus.news_editor.system", kConsensusEditorSystem},
      {"consensus.journalist.system", kConsensusJournalistSystem},
      {"consensus.nlp_researcher.system", kConsensusResearcherSystem},
      {"consensus.news_editor.input", kConsensusEditorInput},
      {"consensus.journalist.input", kConsensusJournalistInput},
      {"consensus.nlp_researcher.input", kConsensusResearcherInput},
      {"consensus.repad", kConsensusRepad},
  };
  return templates;
}

std::vector<std::string> PromptStore::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtin()) out.push_back(k);
  return out;
}

PromptStore::PromptStore(std::optional<std::filesystem::path> dir, std::string language) {
  if (!dir) return;
  if (!std::filesystem::is_directory(*dir)) {
    throw Error(ErrorCode::kConfig, "prompt directory not found: " + dir->string());
  }
  for (const auto& key : keys()) {
    const auto file = *dir / (key + "." + language + ".txt");
    if (!std::filesystem::exists(file)) continue;
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string body = ss.str();
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    overrides_[key] = std::move(body);
  }
}

const std::string& PromptStore::get(std::string_view key) const {
  if (auto it = overrides_.find(key); it != overrides_.end()) return it->second;
  const auto& b = builtin();
  auto it = b.find(key);
  if (it == b.end()) throw Error(ErrorCode::kConfig, "unknown prompt template '" + std::string(key) + "'");
  return it->second;
}

void PromptStore::dump_builtin(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [key, body] : builtin()) {
    std::ofstream out(dir / (key + ".en.txt"));
    out << body << '\n';
  }
}

std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const std::string name(tmpl.substr(i + 1, close - i - 1));
        if (auto it = values.find(name); it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

}  // namespace tlsum
