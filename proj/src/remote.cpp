#include "tlsum/remote.hpp"

#include <cstdlib>
#include <regex>

#include <httplib.h>

#include "tlsum/text.hpp"

namespace tlsum {

namespace {

std::optional<std::string> env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

nlohmann::json post_json(const HttpEndpoint& ep, const nlohmann::json& body) {
  const ParsedUrl url = parse_url(ep.url);
  httplib::Client cli(url.origin);
  cli.set_connection_timeout(ep.timeout_seconds);
  cli.set_read_timeout(ep.timeout_seconds);
  cli.set_write_timeout(ep.timeout_seconds);
  httplib::Headers headers;
  if (ep.api_key) headers.emplace("Authorization", "Bearer " + *ep.api_key);
  auto res = cli.Post(url.path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendUnavailable, ep.url + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw Error(ErrorCode::kBackendUnavailable, ep.url + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kModelError, ep.url + ": HTTP " + std::to_string(res->status) + " " + res->body);
  }
  auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kModelError, ep.url + ": response is not JSON");
  return j;
}

}  // namespace

std::optional<HttpEndpoint> endpoint_from_env(const std::string& prefix) {
  auto url = env(prefix + "_ENDPOINT");
  if (!url) return std::nullopt;
  HttpEndpoint ep;
  ep.url = *url;
  ep.model = env(prefix + "_MODEL").value_or("");
  ep.api_key = env(prefix + "_API_KEY");
  return ep;
}

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error(ErrorCode::kConfig, "not an http(s) URL: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  nlohmann::json body = {{"model", endpoint_.model},
                         {"messages",
                          {{{"role", "system"}, {"content", request.system}},
                           {{"role", "user"}, {"content", request.user}}}},
                         {"temperature", request.decoding.temperature}};
  if (request.decoding.max_tokens > 0) body["max_tokens"] = request.decoding.max_tokens;
  const auto j = post_json(endpoint_, body);
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kModelError, endpoint_.url + ": no choices[0].message.content in response");
  }
}

bool parse_nli_response(const nlohmann::json& j) {
  auto is_entail = [](std::string label) { return text::ascii_lower(label).rfind("entail", 0) == 0; };
  if (j.contains("label") && j.at("label").is_string()) return is_entail(j.at("label").get<std::string>());
  if (j.contains("scores") && j.at("scores").is_object() && !j.at("scores").empty()) {
    std::string best;
    double best_p = -1;
    for (const auto& [label, p] : j.at("scores").items()) {
      if (!p.is_number()) throw Error(ErrorCode::kModelError, "non-numeric NLI score");
      if (p.get<double>() > best_p) {
        best_p = p.get<double>();
        best = label;
      }
    }
    return is_entail(best);
  }
  throw Error(ErrorCode::kModelError, "unrecognized NLI response: " + j.dump());
}

std::string RemoteNliEntailment::id() const {
  return "nli:" + endpoint_.model + (mode_ == PremiseMode::kPerAtom ? ":per-atom" : ":joined");
}

bool RemoteNliEntailment::classify(const std::string& premise, const std::string& hypothesis) {
  nlohmann::json body = {{"premise", premise}, {"hypothesis", hypothesis}};
  if (!endpoint_.model.empty()) body["model"] = endpoint_.model;
  return parse_nli_response(post_json(endpoint_, body));
}

bool RemoteNliEntailment::entails(std::span<const EventAtom> evidence, const EventAtom& claim) {
  if (mode_ == PremiseMode::kJoinedAtoms) {
    std::vector<std::string> parts;
    for (const auto& a : evidence) parts.push_back(a.text());
    return classify(text::join(parts, " "), claim.text());
  }
  for (const auto& a : evidence) {
    if (classify(a.text(), claim.text())) return true;
  }
  return false;
}

}  // namespace tlsum
