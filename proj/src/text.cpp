// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace claimdpo {
namespace {

bool is_core_word_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80 || c == '#' || c == '@' || c == '_';
}

bool is_joiner(unsigned char c) { return c == '\'' || c == '-'; }

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_core_word_char(c)) {
      cur.push_back(static_cast<char>(c));
      continue;
    }
    if (is_joiner(c) && !cur.empty() && i + 1 < text.size() &&
        is_core_word_char(static_cast<unsigned char>(text[i + 1]))) {
      cur.push_back(static_cast<char>(c));
      continue;
    }
    if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> normalized_tokens(std::string_view text) {
  auto toks = word_tokens(text);
  for (auto& t : toks) t = to_lower(t);
  return toks;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trim(std::string_view text) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool in_space = false;
  for (const char ch : trim(text)) {
    if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
      in_space = true;
      continue;
    }
    if (in_space) out.push_back(' ');
    in_space = false;
    out.push_back(ch);
  }
  return out;
}

std::size_t whitespace_word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (const char ch : text) {
    const bool space = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  return to_lower(text.substr(0, prefix.size())) == to_lower(prefix);
}

bool is_negation_cue(std::string_view tok) {
  static constexpr std::array<std::string_view, 5> kCues = {
      "not", "no", "never", "without", "cannot"};
  if (std::find(kCues.begin(), kCues.end(), tok) != kCues.end()) return true;
  return tok.size() > 3 && tok.substr(tok.size() - 3) == "n't";
}

}  // namespace claimdpo
