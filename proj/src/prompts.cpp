// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/prompts.hpp"

#include "claimdpo/error.hpp"
#include "claimdpo/jsonl.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {

std::string tweet_prompt(std::string_view seed_claim) {
  if (trim(seed_claim).empty()) throw ValidationError("tweet_prompt: seed claim is blank");
  std::string p =
      "Your task is to write a Twitter post in which you paraphrase a claim or statement "
      "that I give you. Please paraphrase the statement so that it reads like one of your "
      "social media posts. ";
  p += kJsonInstruction;
  p += ' ';
  p += kStatementMarker;
  p += seed_claim;
  return p;
}

std::string tweet_prompt(const ClaimRecord& c) { return tweet_prompt(c.seed_claim); }

PromptPair extraction_prompt(std::string_view tweet, ExtractionVariant variant) {
  if (trim(tweet).empty()) throw ValidationError("extraction_prompt: tweet is blank");
  PromptPair out;
  switch (variant) {
    case ExtractionVariant::kDpo:
      out.system = "You are a fact checking assistant.";
      out.task = "Your task is to extract the checkworthy claim from a piece of text. ";
      break;
    case ExtractionVariant::kZeroshotCore:
      out.system = "You are a helpful, highly skilled assistant.";
      out.task = "Your task is to extract the core claim from a piece of text. ";
      out.task += kJsonInstruction;
      out.task += ' ';
      break;
    case ExtractionVariant::kZeroshotCheckworthy:
      out.system = "You are an experienced fact checker.";
      out.task = "Your task is to extract the checkworthy claim from a piece of text. ";
      out.task += kJsonInstruction;
      out.task += ' ';
      break;
  }
  out.task += kTextMarker;
  out.task += tweet;
  return out;
}

std::optional<std::string> text_after_marker(std::string_view prompt, std::string_view marker) {
  const auto pos = prompt.rfind(marker);
  if (pos == std::string_view::npos) return std::nullopt;
  return std::string(prompt.substr(pos + marker.size()));
}

std::optional<std::string> unwrap_structured_reply(std::string_view reply) {
  const auto try_parse = [](std::string_view s) -> std::optional<std::string> {
    const Json j = Json::parse(s, nullptr, /*allow_exceptions=*/false);
    if (j.is_object() && j.contains("post") && j["post"].is_string()) {
      return j["post"].get<std::string>();
    }
    return std::nullopt;
  };
  if (auto whole = try_parse(trim(reply))) return whole;
  const auto open = reply.find('{');
  const auto close = reply.rfind('}');
  if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
    return try_parse(reply.substr(open, close - open + 1));
  }
  return std::nullopt;
}

std::string postprocess_paraphrase(std::string_view reply) {
  if (auto inner = unwrap_structured_reply(reply)) return collapse_whitespace(*inner);
  return collapse_whitespace(reply);
}

}  // namespace claimdpo
