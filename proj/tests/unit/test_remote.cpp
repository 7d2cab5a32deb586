#include <atomic>
#include <cstdlib>
#include <functional>
#include <optional>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "tlsum/remote.hpp"

using namespace tlsum;

namespace {

class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST(Url, Parse) {
  auto u = parse_url("https://api.example.com:8443/v1/chat/completions");
  EXPECT_EQ(u.origin, "https://api.example.com:8443");
  EXPECT_EQ(u.path, "/v1/chat/completions");
  EXPECT_EQ(parse_url("http://localhost").path, "/");
  EXPECT_EQ(code_of([] { parse_url("ftp://x/y"); }), ErrorCode::kConfig);
}

TEST(Env, EndpointFromEnvironment) {
  ::unsetenv("TLSUMTEST_ENDPOINT");
  EXPECT_FALSE(endpoint_from_env("TLSUMTEST"));
  ::setenv("TLSUMTEST_ENDPOINT", "http://127.0.0.1:1/v1", 1);
  ::setenv("TLSUMTEST_MODEL", "m1", 1);
  ::setenv("TLSUMTEST_API_KEY", "k", 1);
  auto ep = endpoint_from_env("TLSUMTEST");
  ASSERT_TRUE(ep);
  EXPECT_EQ(ep->model, "m1");
  EXPECT_EQ(ep->api_key, "k");
  ::unsetenv("TLSUMTEST_ENDPOINT");
}

TEST(HttpChat, RequestAndResponse) {
  LocalServer s;
  std::atomic<int> status{200};
  nlohmann::json seen;
  std::string auth;
  s.server().Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.status = status;
    if (status == 200) {
      res.set_content(R"({"choices": [{"message": {"role": "assistant", "content": "1. 2023-01-01: A."}}]})",
                      "application/json");
    } else {
      res.set_content("busy", "text/plain");
    }
  });
  HttpChatClient client({s.url("/v1/chat"), "test-model", "secret", 5});
  EXPECT_EQ(client.id(), "http:test-model");
  ChatRequest req{"job", "sys", "usr"};
  EXPECT_EQ(client.complete(req), "1. 2023-01-01: A.");
  EXPECT_EQ(seen["model"], "test-model");
  EXPECT_EQ(seen["messages"][0]["role"], "system");
  EXPECT_EQ(seen["messages"][0]["content"], "sys");
  EXPECT_EQ(seen["messages"][1]["content"], "usr");
  EXPECT_EQ(auth, "Bearer secret");

  status = 503;
  EXPECT_EQ(code_of([&] { client.complete(req); }), ErrorCode::kBackendUnavailable);
  status = 429;
  EXPECT_EQ(code_of([&] { client.complete(req); }), ErrorCode::kBackendUnavailable);
  status = 400;
  EXPECT_EQ(code_of([&] { client.complete(req); }), ErrorCode::kModelError);

  HttpChatClient nowhere({"http://127.0.0.1:1/v1/chat", "m", std::nullopt, 1});
  EXPECT_EQ(code_of([&] { nowhere.complete(req); }), ErrorCode::kBackendUnavailable);
}

TEST(Nli, ParseShapes) {
  EXPECT_TRUE(parse_nli_response({{"label", "ENTAILMENT"}}));
  EXPECT_FALSE(parse_nli_response({{"label", "neutral"}}));
  EXPECT_TRUE(parse_nli_response({{"scores", {{"entailment", 0.7}, {"contradiction", 0.2}}}}));
  EXPECT_FALSE(parse_nli_response({{"scores", {{"entailment", 0.2}, {"neutral", 0.7}}}}));
  EXPECT_EQ(code_of([] { parse_nli_response({{"x", 1}}); }), ErrorCode::kModelError);
}

TEST(Nli, PremiseModes) {
  LocalServer s;
  std::atomic<int> calls{0};
  s.server().Post("/nli", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    auto j = nlohmann::json::parse(req.body);
    const std::string premise = j["premise"];
    const std::string hyp = j["hypothesis"];
    const bool ok = premise.find(hyp) != std::string::npos;
    res.set_content(nlohmann::json{{"label", ok ? "entailment" : "neutral"}}.dump(), "application/json");
  });
  std::vector<EventAtom> evidence{EventAtom("Rain fell"), EventAtom("Rivers rose")};

  RemoteNliEntailment joined({s.url("/nli"), "nli-model", std::nullopt, 5});
  EXPECT_EQ(joined.id(), "nli:nli-model:joined");
  EXPECT_TRUE(joined.entails(evidence, EventAtom("Rivers rose")));
  EXPECT_FALSE(joined.entails(evidence, EventAtom("Snow fell")));
  EXPECT_EQ(calls.load(), 2);

  calls = 0;
  RemoteNliEntailment per({s.url("/nli"), "nli-model", std::nullopt, 5}, PremiseMode::kPerAtom);
  EXPECT_EQ(per.id(), "nli:nli-model:per-atom");
  EXPECT_TRUE(per.entails(evidence, EventAtom("Rivers rose")));
  EXPECT_FALSE(per.entails(evidence, EventAtom("Snow fell")));
  EXPECT_FALSE(per.entails({}, EventAtom("Snow fell")));
  EXPECT_GE(calls.load(), 3);
}
