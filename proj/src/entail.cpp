#include "tlsum/entail.hpp"

#include <mutex>

#include "tlsum/text.hpp"

namespace tlsum {

std::string exact_match_key(std::string_view atom) {
  std::string s = text::ascii_lower(text::collapse_whitespace(atom));
  auto terminal = [](std::string_view t) {
    static constexpr std::string_view kAscii = ".!?;:,";
    if (!t.empty() && kAscii.find(t.back()) != std::string_view::npos) return std::size_t{1};
    for (std::string_view cjk : {"\xE3\x80\x82", "\xEF\xBC\x81", "\xEF\xBC\x9F", "\xEF\xBC\x9B", "\xEF\xBC\x8C"}) {
      if (t.ends_with(cjk)) return cjk.size();
    }
    return std::size_t{0};
  };
  for (std::size_t n = terminal(s); n > 0; n = terminal(s)) {
    s.resize(s.size() - n);
    while (!s.empty() && s.back() == ' ') s.pop_back();
  }
  return s;
}

bool ExactMatchEntailment::entails(std::span<const EventAtom> evidence, const EventAtom& claim) {
  const std::string key = exact_match_key(claim.text());
  for (const auto& e : evidence) {
    if (exact_match_key(e.text()) == key) return true;
  }
  return false;
}

bool ScriptedEntailment::entails(std::span<const EventAtom> evidence, const EventAtom& claim) {
  if (unavailable_) throw Error(ErrorCode::kBackendUnavailable, "scripted entailment outage");
  for (const auto& e : evidence) {
    auto it = table_.find({e.text(), claim.text()});
    if (it != table_.end() && it->second) return true;
  }
  return false;
}

bool CachingEntailment::entails(std::span<const EventAtom> evidence, const EventAtom& claim) {
  std::uint64_t h = text::fnv1a64(inner_.id());
  for (const auto& e : evidence) {
    h = text::fnv1a64(e.text(), h);
    h = text::fnv1a64(std::string_view("\x1f", 1), h);
  }
  // Hashes alone could collide; the claim text is kept verbatim in the key.
  std::string key = text::hex64(h) + '\x1e' + std::to_string(evidence.size()) + '\x1e' + claim.text();
  {
    std::shared_lock lock(mu_);
    if (auto it = verdicts_.find(key); it != verdicts_.end()) return it->second;
  }
  const bool verdict = inner_.entails(evidence, claim);
  std::unique_lock lock(mu_);
  verdicts_.emplace(std::move(key), verdict);
  return verdict;
}

std::size_t CachingEntailment::size() const {
  std::shared_lock lock(mu_);
  return verdicts_.size();
}

bool entail(std::span<const EventAtom> evidence, const EventAtom& claim, EntailmentBackend& backend) {
  if (evidence.empty()) return false;
  return backend.entails(evidence, claim);
}

double harmonic_f1(double precision, double recall) {
  const double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

double entailment_precision(std::span<const EventAtom> pred, std::span<const EventAtom> ref,
                            EntailmentBackend& backend, Diagnostics* diagnostics) {
  if (pred.empty()) {
    add_diagnostic(diagnostics, "EmptyClaimSet", "no claim atoms to score");
    return 0.0;
  }
  std::size_t entailed = 0;
  for (const auto& claim : pred) {
    if (entail(ref, claim, backend)) ++entailed;
  }
  return static_cast<double>(entailed) / static_cast<double>(pred.size());
}

double entailment_recall(std::span<const EventAtom> pred, std::span<const EventAtom> ref,
                         EntailmentBackend& backend, Diagnostics* diagnostics) {
  return entailment_precision(ref, pred, backend, diagnostics);
}

EntailmentScore entailment_f1(std::span<const EventAtom> pred, std::span<const EventAtom> ref,
                              EntailmentBackend& backend, Diagnostics* diagnostics) {
  EntailmentScore s;
  s.precision = entailment_precision(pred, ref, backend, diagnostics);
  s.recall = entailment_recall(pred, ref, backend, diagnostics);
  s.f1 = harmonic_f1(s.precision, s.recall);
  return s;
}

}  // namespace tlsum
