// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace claimdpo {

using TokenId = std::int32_t;

inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kUnk = 2;
inline constexpr TokenId kSep = 3;
inline constexpr std::size_t kNumReserved = 4;

// Word-level vocabulary over normalized_tokens(). Reserved tokens occupy
// ids 0-3.
class Tokenizer {
 public:
  Tokenizer() = default;
  // `vocab` must start with the four reserved strings and contain no
  // duplicates.
  explicit Tokenizer(std::vector<std::string> vocab);

  // Reserved tokens plus the (max_vocab - 4) most frequent tokens, ties
  // broken lexicographically. Throws ValidationError on an empty corpus or
  // max_vocab < 5.
  static Tokenizer build(std::span<const std::string> corpus, std::size_t max_vocab);

  TokenId id_of(std::string_view normalized_token) const;
  std::vector<TokenId> encode(std::string_view text) const;
  // Space-joined vocabulary strings.
  std::string decode(std::span<const TokenId> ids) const;

  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t size() const { return vocab_.size(); }
  bool operator==(const Tokenizer& o) const { return vocab_ == o.vocab_; }

  static const std::vector<std::string>& reserved();

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> index_;
};

}  // namespace claimdpo
