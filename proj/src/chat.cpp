#include "tlsum/chat.hpp"

namespace tlsum {

AuditLog::AuditLog(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw Error(ErrorCode::kUnreadable, "cannot open audit log " + path.string());
}

void AuditLog::record(const ChatRequest& request, const std::string& client_id, int attempt,
                      const std::optional<std::string>& response, const std::optional<std::string>& error) {
  nlohmann::json j = {{"job_id", request.job_id},
                      {"client", client_id},
                      {"attempt", attempt},
                      {"temperature", request.decoding.temperature},
                      {"system", request.system},
                      {"user", request.user}};
  if (response) j["response"] = *response;
  if (error) j["error"] = *error;
  std::lock_guard lock(mu_);
  out_ << j.dump() << '\n';
  out_.flush();
}

std::string RetryingClient::complete(const ChatRequest& request) {
  const int attempts = std::max(1, policy_.max_attempts);
  for (int attempt = 1;; ++attempt) {
    try {
      std::string response = inner_.complete(request);
      if (audit_ != nullptr) audit_->record(request, inner_.id(), attempt, response, std::nullopt);
      return response;
    } catch (const Error& e) {
      if (audit_ != nullptr) audit_->record(request, inner_.id(), attempt, std::nullopt, std::string(e.what()));
      const bool retryable = e.code() == ErrorCode::kBackendUnavailable || e.code() == ErrorCode::kModelError;
      if (!retryable || attempt >= attempts) throw;
    }
  }
}

ScriptedChatClient::ScriptedChatClient(Handler handler, std::string id)
    : handler_(std::move(handler)), id_(std::move(id)) {}

ScriptedChatClient::ScriptedChatClient(std::vector<ScriptRule> rules, std::string id)
    : rules_(std::move(rules)), cursor_(rules_.size(), 0), id_(std::move(id)) {}

ScriptedChatClient ScriptedChatClient::sequence(std::vector<std::string> responses) {
  auto state = std::make_shared<std::pair<std::vector<std::string>, std::size_t>>(std::move(responses), 0);
  return ScriptedChatClient([state](const ChatRequest&) {
    auto& [items, next] = *state;
    if (items.empty()) throw Error(ErrorCode::kBackendUnavailable, "empty script");
    const std::string& r = items[std::min(next, items.size() - 1)];
    ++next;
    return r;
  });
}

ScriptedChatClient ScriptedChatClient::from_json(const nlohmann::json& rules) {
  if (!rules.is_array()) throw Error(ErrorCode::kConfig, "chat script must be an array of rules");
  std::vector<ScriptRule> out;
  for (const auto& r : rules) {
    ScriptRule rule;
    rule.match = r.value("match", "");
    rule.fail = r.value("fail", false);
    if (r.contains("response")) rule.responses.push_back(r.at("response").get<std::string>());
    if (r.contains("responses")) {
      for (const auto& s : r.at("responses")) rule.responses.push_back(s.get<std::string>());
    }
    if (!rule.fail && rule.responses.empty()) throw Error(ErrorCode::kConfig, "script rule without a response");
    out.push_back(std::move(rule));
  }
  return ScriptedChatClient(std::move(out));
}

std::string ScriptedChatClient::respond(const ChatRequest& request) {
  if (handler_) return handler_(request);
  const std::string haystack = request.system + "\n\n" + request.user;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    if (!rule.match.empty() && haystack.find(rule.match) == std::string::npos) continue;
    if (rule.fail) throw Error(ErrorCode::kBackendUnavailable, "scripted outage");
    const std::string& r = rule.responses[cursor_[i] % rule.responses.size()];
    ++cursor_[i];
    return r;
  }
  throw Error(ErrorCode::kBackendUnavailable, "no scripted response matches the request");
}

std::string ScriptedChatClient::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  log_.push_back(request);
  return respond(request);
}

std::size_t ScriptedChatClient::calls() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<ChatRequest> ScriptedChatClient::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

}  // namespace tlsum
