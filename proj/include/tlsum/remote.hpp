#pragma once

#include <optional>
#include <string>

#include "tlsum/chat.hpp"
#include "tlsum/entail.hpp"

namespace tlsum {

struct HttpEndpoint {
  std::string url;  // scheme://host[:port]/path
  std::string model;
  std::optional<std::string> api_key;  // sent as a Bearer token
  int timeout_seconds = 120;
};

// Reads <PREFIX>_ENDPOINT, <PREFIX>_MODEL and <PREFIX>_API_KEY. Returns
// nullopt when the endpoint variable is unset.
std::optional<HttpEndpoint> endpoint_from_env(const std::string& prefix);

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};
// Throws Error(kConfig) for anything but http(s) URLs.
ParsedUrl parse_url(const std::string& url);

// OpenAI-style chat completions: {model, messages, temperature} in,
// choices[0].message.content out. Connection failures, 429 and 5xx throw
// kBackendUnavailable; other failures throw kModelError.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string id() const override { return "http:" + endpoint_.model; }
  std::string complete(const ChatRequest& request) override;

 private:
  HttpEndpoint endpoint_;
};

enum class PremiseMode {
  kJoinedAtoms,  // all evidence atoms joined into one premise
  kPerAtom,      // one request per evidence atom, OR of the verdicts
};

// NLI classifier behind {premise, hypothesis} -> {"label": ...} or
// {"scores": {label: p}}; entailed iff "entailment" is the top label.
class RemoteNliEntailment : public EntailmentBackend {
 public:
  RemoteNliEntailment(HttpEndpoint endpoint, PremiseMode mode = PremiseMode::kJoinedAtoms)
      : endpoint_(std::move(endpoint)), mode_(mode) {}
  std::string id() const override;
  bool entails(std::span<const EventAtom> evidence, const EventAtom& claim) override;

 private:
  bool classify(const std::string& premise, const std::string& hypothesis);

  HttpEndpoint endpoint_;
  PremiseMode mode_;
};

// True iff the response names "entailment" as its most likely label.
// Throws Error(kModelError) for unrecognized shapes.
bool parse_nli_response(const nlohmann::json& response);

}  // namespace tlsum
