#include "tlsum/atoms.hpp"

#include <array>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "tlsum/json_extract.hpp"
#include "tlsum/parallel.hpp"
#include "tlsum/text.hpp"

namespace tlsum {

namespace {

constexpr std::string_view kCjkFullStop = "\xE3\x80\x82";    // U+3002
constexpr std::string_view kCjkExclaim = "\xEF\xBC\x81";     // U+FF01
constexpr std::string_view kCjkQuestion = "\xEF\xBC\x9F";    // U+FF1F
constexpr std::string_view kCjkSemicolon = "\xEF\xBC\x9B";   // U+FF1B
constexpr std::string_view kCjkComma = "\xEF\xBC\x8C";       // U+FF0C

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool opens_clause(std::string_view rest) {
  std::size_t end = 0;
  while (end < rest.size() && !is_space(rest[end]) && rest[end] != ',' && rest[end] != ';') ++end;
  const std::string_view word = rest.substr(0, end);
  if (word.empty()) return false;
  if (text::starts_with_upper(word)) return true;
  static constexpr std::array<std::string_view, 19> kOpeners = {
      "the", "a", "an", "he", "she", "it", "they", "we", "i", "you",
      "his", "her", "its", "their", "our", "this", "that", "these", "those"};
  const std::string lower = text::ascii_lower(word);
  for (auto w : kOpeners) {
    if (lower == w) return true;
  }
  return false;
}

// Splits one sentence at clause delimiters; delimiters are dropped.
std::vector<std::string> split_clauses(std::string_view s) {
  std::vector<std::string> pieces;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    std::string piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) pieces.push_back(std::move(piece));
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ';') {
      emit(i);
      start = ++i;
      continue;
    }
    if (s.substr(i, kCjkSemicolon.size()) == kCjkSemicolon || s.substr(i, kCjkComma.size()) == kCjkComma) {
      emit(i);
      i += 3;
      start = i;
      continue;
    }
    // " and " (optionally ", and ") followed by a new clause.
    if (is_space(s[i]) && s.substr(i + 1, 4) == "and " && i + 5 < s.size() && opens_clause(s.substr(i + 5))) {
      std::size_t cut = i;
      while (cut > start && is_space(s[cut - 1])) --cut;
      if (cut > start && s[cut - 1] == ',') --cut;
      emit(cut);
      i += 5;
      while (i < s.size() && is_space(s[i])) ++i;
      start = i;
      continue;
    }
    ++i;
  }
  emit(s.size());
  return pieces;
}

bool is_string_array(const nlohmann::json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (!e.is_string()) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    std::string piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    start = end;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const std::string_view rest = s.substr(i);
    if (rest.starts_with(kCjkFullStop) || rest.starts_with(kCjkExclaim) || rest.starts_with(kCjkQuestion)) {
      i += 3;
      emit(i);
      continue;
    }
    const char c = s[i];
    if (c == '\n') {
      emit(i);
      ++i;
      continue;
    }
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || is_space(s[i + 1]))) {
      ++i;
      emit(i);
      continue;
    }
    ++i;
  }
  emit(s.size());
  return out;
}

std::vector<EventAtom> rule_based_decompose(std::string_view sentence) {
  if (text::trim(sentence).empty()) throw Error(ErrorCode::kInvalidArgument, "cannot decompose an empty sentence");
  std::vector<EventAtom> atoms;
  for (const auto& s : split_sentences(sentence)) {
    for (auto& clause : split_clauses(s)) atoms.emplace_back(clause);
  }
  if (atoms.empty()) atoms.emplace_back(sentence);
  return atoms;
}

std::vector<EventAtom> RuleBasedDecomposer::decompose(std::string_view sentence) {
  return rule_based_decompose(sentence);
}

std::vector<EventAtom> parse_decomposition_response(std::string_view text) {
  auto j = find_first_json(text, '[', &is_string_array);
  if (!j) throw Error(ErrorCode::kUnparseableResponse, "no string array in decomposition response");
  std::vector<EventAtom> atoms;
  for (const auto& e : *j) {
    const std::string s = text::collapse_whitespace(e.get<std::string>());
    if (!s.empty()) atoms.emplace_back(s);
  }
  if (atoms.empty()) throw Error(ErrorCode::kUnparseableResponse, "decomposition array is empty");
  return atoms;
}

PromptedDecomposer::PromptedDecomposer(ChatClient& client, const PromptStore& prompts, std::string template_id)
    : client_(client), system_prompt_(prompts.get(template_id)), template_id_(std::move(template_id)) {}

std::string PromptedDecomposer::id() const {
  return "prompted:" + client_.id() + ":" + template_id_ + ":" + text::hex64(text::fnv1a64(system_prompt_));
}

std::vector<EventAtom> PromptedDecomposer::decompose(std::string_view sentence) {
  ChatRequest req;
  req.job_id = "decompose:" + text::hex64(text::fnv1a64(sentence));
  req.system = system_prompt_;
  req.user = text::collapse_whitespace(sentence);
  return parse_decomposition_response(client_.complete(req));
}

AtomCache::AtomCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
}

std::string AtomCache::key(const std::string& backend_id, std::string_view sentence) {
  const std::string norm = text::collapse_whitespace(sentence);
  return text::hex64(text::fnv1a64(backend_id)) + "-" + text::hex64(text::fnv1a64(norm));
}

std::optional<std::vector<EventAtom>> AtomCache::get(const std::string& backend_id, std::string_view sentence) const {
  const std::string k = key(backend_id, sentence);
  {
    std::shared_lock lock(mu_);
    if (auto it = entries_.find(k); it != entries_.end()) return make_atoms(it->second);
  }
  if (!dir_) return std::nullopt;
  std::ifstream in(*dir_ / (k + ".json"));
  if (!in) return std::nullopt;
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("backend", "") != backend_id ||
      j.value("sentence", "") != text::collapse_whitespace(sentence) || !j.contains("atoms")) {
    return std::nullopt;
  }
  auto texts = j.at("atoms").get<std::vector<std::string>>();
  std::unique_lock lock(mu_);
  entries_.emplace(k, texts);
  return make_atoms(texts);
}

void AtomCache::put(const std::string& backend_id, std::string_view sentence, const std::vector<EventAtom>& atoms) {
  const std::string k = key(backend_id, sentence);
  auto texts = atom_texts(atoms);
  std::unique_lock lock(mu_);
  entries_[k] = texts;
  if (!dir_) return;
  const nlohmann::json j = {
      {"backend", backend_id}, {"sentence", text::collapse_whitespace(sentence)}, {"atoms", texts}};
  const auto final_path = *dir_ / (k + ".json");
  const auto tmp = *dir_ / (k + ".json.tmp");
  {
    std::ofstream out(tmp);
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, final_path);
}

std::size_t AtomCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

DecomposeOutcome decompose(std::string_view sentence, Decomposer& backend, AtomCache* cache,
                           const DecomposePolicy& policy) {
  if (text::trim(sentence).empty()) throw Error(ErrorCode::kInvalidArgument, "cannot decompose an empty sentence");
  const std::string id = backend.id();
  if (cache != nullptr) {
    if (auto hit = cache->get(id, sentence)) return {std::move(*hit), true, false, {}};
  }
  try {
    auto atoms = backend.decompose(sentence);
    if (atoms.empty()) throw Error(ErrorCode::kUnparseableResponse, "backend returned no atoms");
    if (cache != nullptr) cache->put(id, sentence, atoms);
    return {std::move(atoms), false, false, {}};
  } catch (const Error& e) {
    const bool recoverable = e.code() == ErrorCode::kBackendUnavailable ||
                             e.code() == ErrorCode::kUnparseableResponse || e.code() == ErrorCode::kModelError;
    if (!recoverable || !policy.fallback_to_rules) throw;
    return {rule_based_decompose(sentence), false, true, e.what()};
  }
}

DecomposedTimeline decompose_timeline(const Timeline& timeline, Decomposer& backend, AtomCache* cache,
                                      const DecomposePolicy& policy) {
  // Unique pending summaries, in node order.
  std::vector<std::string> pending;
  std::vector<std::size_t> node_job(timeline.size(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> first_node;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    if (timeline[i].decomposed()) continue;
    const std::string norm = text::collapse_whitespace(timeline[i].summary);
    std::size_t j = 0;
    while (j < pending.size() && pending[j] != norm) ++j;
    if (j == pending.size()) {
      pending.push_back(norm);
      first_node.push_back(i);
    }
    node_job[i] = j;
  }

  std::vector<DecomposeOutcome> outcomes(pending.size());
  parallel_for(pending.size(), policy.max_concurrency, [&](std::size_t j) {
    try {
      outcomes[j] = decompose(pending[j], backend, cache, policy);
    } catch (const Error& e) {
      throw Error(e.code(), "node " + std::to_string(first_node[j]) + ": " + e.what());
    }
  });

  DecomposedTimeline out{timeline, {}, {}};
  for (const auto& o : outcomes) {
    if (o.from_cache) {
      ++out.stats.cache_hits;
    } else {
      ++out.stats.backend_calls;
    }
    if (o.fell_back) ++out.stats.fallbacks;
  }
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    if (node_job[i] == static_cast<std::size_t>(-1)) continue;
    const auto& o = outcomes[node_job[i]];
    out.timeline.set_atoms(i, o.atoms);
    if (o.fell_back) {
      out.diagnostics.push_back({"decompose_fallback", "node " + std::to_string(i) + " (" +
                                                           timeline[i].timestamp.to_string() +
                                                           "): rule-based atoms used: " + o.failure});
    }
  }
  return out;
}

DecomposedText decompose_article(const Article& article, Decomposer& backend, AtomCache* cache,
                                 const DecomposePolicy& policy) {
  std::vector<std::string> sentences;
  if (article.paragraphs.empty()) {
    sentences = split_sentences(article.title);
  } else {
    for (const auto& p : article.paragraphs) {
      auto s = split_sentences(p);
      sentences.insert(sentences.end(), s.begin(), s.end());
    }
  }
  std::vector<DecomposeOutcome> outcomes(sentences.size());
  parallel_for(sentences.size(), policy.max_concurrency, [&](std::size_t i) {
    try {
      outcomes[i] = decompose(sentences[i], backend, cache, policy);
    } catch (const Error& e) {
      throw Error(e.code(), "article " + article.id + ": " + e.what());
    }
  });
  DecomposedText out;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.from_cache) {
      ++out.stats.cache_hits;
    } else {
      ++out.stats.backend_calls;
    }
    if (o.fell_back) {
      ++out.stats.fallbacks;
      out.diagnostics.push_back({"decompose_fallback", "article " + article.id + " sentence " +
                                                           std::to_string(i) + ": " + o.failure});
    }
    out.atoms.insert(out.atoms.end(), o.atoms.begin(), o.atoms.end());
  }
  return out;
}

}  // namespace tlsum
