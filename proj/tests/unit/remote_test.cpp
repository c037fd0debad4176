// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

// Client-side wire tests against an in-process HTTP server.

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "claimdpo/error.hpp"
#include "claimdpo/factcheck.hpp"
#include "claimdpo/generator.hpp"
#include "httplib.h"

namespace claimdpo {
namespace {

class FakeBridge {
 public:
  FakeBridge() {
    server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
      ++generate_calls;
      last_auth = req.get_header_value("Authorization");
      if (generate_failures > 0) {
        --generate_failures;
        res.status = 503;
        return;
      }
      const Json body = Json::parse(req.body);
      last_request = body;
      res.set_content(Json{{"text", "echo: " + body.at("prompt").get<std::string>()},
                           {"model_id", "fake-7b"}}
                          .dump(),
                      "application/json");
    });
    server_.Post("/nli", [this](const httplib::Request& req, httplib::Response& res) {
      const Json body = Json::parse(req.body);
      last_request = body;
      if (nli_mode == "bad_request") {
        res.status = 422;
        res.set_content("{\"detail\":\"missing evidence\"}", "application/json");
      } else if (nli_mode == "html") {
        res.set_content("<html>oops</html>", "text/html");
      } else {
        res.set_content(Json{{"label", "refuted"},
                             {"probs", {{"supported", 0.1}, {"refuted", 0.8}, {"neutral", 0.1}}}}
                            .dump(),
                        "application/json");
      }
    });
    server_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok","generator_model_id":"fake-7b","nli_model_id":"fake-nli"})",
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeBridge() {
    server_.stop();
    thread_.join();
  }

  RemoteEndpoint endpoint() const {
    RemoteEndpoint ep;
    ep.base_url = "http://127.0.0.1:" + std::to_string(port_);
    ep.timeout_seconds = 5;
    return ep;
  }

  std::atomic<int> generate_calls{0};
  std::atomic<int> generate_failures{0};
  std::string nli_mode = "ok";
  std::string last_auth;
  Json last_request;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(RemoteGenerator, SendsTheWireRequest) {
  FakeBridge bridge;
  auto ep = bridge.endpoint();
  ep.api_key = "s3cret";
  RemoteGenerator gen(ep);
  GenerateRequest req{"sys", "hello", 0.5, 32, 99};
  const auto res = gen.generate(req);
  EXPECT_EQ(res.text, "echo: hello");
  EXPECT_EQ(res.model_id, "fake-7b");
  EXPECT_EQ(bridge.last_request.at("system"), "sys");
  EXPECT_EQ(bridge.last_request.at("temperature"), 0.5);
  EXPECT_EQ(bridge.last_request.at("max_new_tokens"), 32);
  EXPECT_EQ(bridge.last_request.at("seed"), 99);
  EXPECT_EQ(bridge.last_auth, "Bearer s3cret");
  EXPECT_EQ(gen.model_id(), "fake-7b");
}

TEST(RemoteGenerator, RetriesServerErrors) {
  FakeBridge bridge;
  bridge.generate_failures = 2;
  RemoteGenerator gen(bridge.endpoint());
  EXPECT_EQ(gen.generate({"", "x", 0.7, 8, 0}).text, "echo: x");
  EXPECT_EQ(bridge.generate_calls, 3);

  bridge.generate_failures = 5;
  bridge.generate_calls = 0;
  EXPECT_THROW(gen.generate({"", "x", 0.7, 8, 0}), TransportError);
  EXPECT_EQ(bridge.generate_calls, 3);  // first attempt + 2 retries
}

TEST(RemoteFactChecker, ParsesVerdicts) {
  FakeBridge bridge;
  RemoteFactChecker fc(bridge.endpoint());
  const Verdict v = predict(fc, "zinc cures colds", "no evidence");
  EXPECT_EQ(v.label, Label::kRefuted);
  EXPECT_NEAR(v.confidence(), 0.8, 1e-12);
  EXPECT_EQ(bridge.last_request.at("claim"), "zinc cures colds");
  EXPECT_EQ(bridge.last_request.at("evidence"), "no evidence");
}

TEST(RemoteFactChecker, ClientErrorsAreProtocolErrors) {
  FakeBridge bridge;
  RemoteFactChecker fc(bridge.endpoint());
  bridge.nli_mode = "bad_request";
  EXPECT_THROW(fc.check("a", "b"), ProtocolError);
  bridge.nli_mode = "html";
  EXPECT_THROW(fc.check("a", "b"), ProtocolError);
}

TEST(Remote, UnreachableHostIsATransportError) {
  RemoteEndpoint ep;
  ep.base_url = "http://127.0.0.1:1";
  ep.timeout_seconds = 1;
  ep.max_retries = 0;
  EXPECT_THROW(get_json(ep, "/health"), TransportError);
}

TEST(Remote, HealthIsPlainJson) {
  FakeBridge bridge;
  const Json h = get_json(bridge.endpoint(), "/health");
  EXPECT_EQ(h.at("status"), "ok");
}

TEST(RemoteEndpoint, FromEnvironment) {
  ::unsetenv("CLAIMDPO_TEST_URL");
  EXPECT_FALSE(RemoteEndpoint::from_env("CLAIMDPO_TEST_URL"));
  ::setenv("CLAIMDPO_TEST_URL", "http://localhost:9", 1);
  ::setenv("CLAIMDPO_API_KEY", "k", 1);
  const auto ep = RemoteEndpoint::from_env("CLAIMDPO_TEST_URL");
  ASSERT_TRUE(ep);
  EXPECT_EQ(ep->base_url, "http://localhost:9");
  EXPECT_EQ(ep->api_key, "k");
  ::unsetenv("CLAIMDPO_API_KEY");
  ::unsetenv("CLAIMDPO_TEST_URL");
}

}  // namespace
}  // namespace claimdpo
