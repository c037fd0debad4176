// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace claimdpo {

// Splits on whitespace and punctuation, keeping the original case. Word
// characters are alphanumerics, bytes >= 0x80, and '#', '@', '_'; the
// apostrophe and hyphen count as word characters only between two other
// word characters ("don't", "covid-19").
std::vector<std::string> word_tokens(std::string_view text);

// word_tokens() lowercased. This is the tokenization shared by the policy
// vocabulary, the lexical fact checker and the similarity metrics.
std::vector<std::string> normalized_tokens(std::string_view text);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);
std::string collapse_whitespace(std::string_view text);
std::size_t whitespace_word_count(std::string_view text);
bool starts_with_ci(std::string_view text, std::string_view prefix);

// Fixed negation cue list: not, no, never, without, cannot, and any token
// ending in "n't".
bool is_negation_cue(std::string_view lowered_token);

}  // namespace claimdpo
