#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlsum/error.hpp"

namespace tlsum {

struct DecodingConfig {
  // Greedy decoding is always requested; reproducibility depends on it.
  double temperature = 0.0;
  int max_tokens = 0;  // 0 = backend default
};

struct ChatRequest {
  std::string job_id;
  std::string system;
  std::string user;
  DecodingConfig decoding;
};

// A text-in, text-out model endpoint. Transport failures throw
// Error(kBackendUnavailable); malformed replies throw Error(kModelError).
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Append-only JSONL log of every request and response.
class AuditLog {
 public:
  explicit AuditLog(const std::filesystem::path& path);

  void record(const ChatRequest& request, const std::string& client_id, int attempt,
              const std::optional<std::string>& response, const std::optional<std::string>& error);

 private:
  std::mutex mu_;
  std::ofstream out_;
};

struct RetryPolicy {
  int max_attempts = 3;
};

// Bounded retries over an inner client, logging each attempt. After the last
// attempt the final error is rethrown unchanged.
class RetryingClient : public ChatClient {
 public:
  RetryingClient(ChatClient& inner, RetryPolicy policy, AuditLog* audit = nullptr)
      : inner_(inner), policy_(policy), audit_(audit) {}

  std::string id() const override { return inner_.id(); }
  std::string complete(const ChatRequest& request) override;

 private:
  ChatClient& inner_;
  RetryPolicy policy_;
  AuditLog* audit_;
};

struct ScriptRule {
  // Substring matched against "system\n\nuser"; empty matches everything.
  std::string match;
  // Successive matches cycle through these.
  std::vector<std::string> responses;
  bool fail = false;
};

// Deterministic offline client: either a handler function or an ordered rule
// list (first matching rule wins). Thread-safe; records every request.
class ScriptedChatClient : public ChatClient {
 public:
  using Handler = std::function<std::string(const ChatRequest&)>;

  explicit ScriptedChatClient(Handler handler, std::string id = "scripted");
  explicit ScriptedChatClient(std::vector<ScriptRule> rules, std::string id = "scripted");

  // Returns responses in order; the last one repeats once exhausted.
  static ScriptedChatClient sequence(std::vector<std::string> responses);
  static ScriptedChatClient from_json(const nlohmann::json& rules);

  std::string id() const override { return id_; }
  std::string complete(const ChatRequest& request) override;

  std::size_t calls() const;
  std::vector<ChatRequest> requests() const;

 private:
  std::string respond(const ChatRequest& request);

  Handler handler_;
  std::vector<ScriptRule> rules_;
  std::vector<std::size_t> cursor_;
  std::string id_;
  mutable std::mutex mu_;
  std::vector<ChatRequest> log_;
};

}  // namespace tlsum
