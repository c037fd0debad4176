// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "claimdpo/data.hpp"

namespace claimdpo {

inline constexpr std::string_view kStatementMarker = "Here is the statement: ";
inline constexpr std::string_view kTextMarker = "Here is the text: ";
inline constexpr std::string_view kJsonInstruction =
    "Please format your reply as valid json: {\"post\": \"YOUR REPLY\"} Only output the json.";

// Task prompt asking a persona to rewrite the seed claim as a post. Throws
// ValidationError on a blank seed claim.
std::string tweet_prompt(const ClaimRecord& c);
std::string tweet_prompt(std::string_view seed_claim);

enum class ExtractionVariant { kDpo, kZeroshotCore, kZeroshotCheckworthy };

struct PromptPair {
  std::string system;
  std::string task;

  // The single string fed to the toy policy.
  std::string joined() const { return system + "\n" + task; }
};

// Throws ValidationError on a blank tweet.
PromptPair extraction_prompt(std::string_view tweet, ExtractionVariant variant);

// Text following the last occurrence of `marker`, if any.
std::optional<std::string> text_after_marker(std::string_view prompt, std::string_view marker);

// If `reply` is (or contains) a JSON object with a string "post", returns
// that string.
std::optional<std::string> unwrap_structured_reply(std::string_view reply);

// Strips a structured wrapper when present, trims, collapses whitespace.
std::string postprocess_paraphrase(std::string_view reply);

}  // namespace claimdpo
