// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "claimdpo/http.hpp"

namespace claimdpo {

// Wire shape of POST /generate.
struct GenerateRequest {
  std::string system;
  std::string prompt;
  double temperature = 0.7;
  int max_new_tokens = 256;
  std::uint64_t seed = 0;
};

struct GenerateResponse {
  std::string text;
  std::string model_id;
};

Json to_json(const GenerateRequest& r);
GenerateRequest generate_request_from_json(const Json& j);
Json to_json(const GenerateResponse& r);
GenerateResponse generate_response_from_json(const Json& j);

// Text generator behind the tweet-synthesis and zero-shot extraction
// prompts. Implementations must be safe for concurrent generate() calls.
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual GenerateResponse generate(const GenerateRequest& req) = 0;
  virtual bool is_template() const = 0;
  virtual std::string model_id() const = 0;
};

// Deterministic, model-free stand-in. Tweet prompts get a seeded template
// frame around the verbatim claim; extraction prompts get a rule-based
// extraction (hashtags and mentions dropped; the core-claim prompt also keeps
// only the longest sentence). Replies are structured JSON like a real model.
class TemplateGenerator final : public GeneratorBackend {
 public:
  GenerateResponse generate(const GenerateRequest& req) override;
  bool is_template() const override { return true; }
  std::string model_id() const override { return "template-v1"; }
};

// Talks to a bridge service over HTTP: POST /generate.
class RemoteGenerator final : public GeneratorBackend {
 public:
  explicit RemoteGenerator(RemoteEndpoint ep) : ep_(std::move(ep)) {}
  GenerateResponse generate(const GenerateRequest& req) override;
  bool is_template() const override { return false; }
  std::string model_id() const override;

 private:
  RemoteEndpoint ep_;
};

// Rule-based extraction used by TemplateGenerator.
std::string template_extract(std::string_view tweet, bool core_only);

}  // namespace claimdpo
