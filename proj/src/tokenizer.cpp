// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/tokenizer.hpp"

#include <algorithm>
#include <map>

#include "claimdpo/error.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {

const std::vector<std::string>& Tokenizer::reserved() {
  static const std::vector<std::string> kReserved = {"<bos>", "<eos>", "<unk>", "<sep>"};
  return kReserved;
}

Tokenizer::Tokenizer(std::vector<std::string> vocab) : vocab_(std::move(vocab)) {
  if (vocab_.size() < kNumReserved ||
      !std::equal(reserved().begin(), reserved().end(), vocab_.begin())) {
    throw ValidationError("vocabulary must begin with <bos> <eos> <unk> <sep>");
  }
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], static_cast<TokenId>(i)).second) {
      throw ValidationError("duplicate vocabulary entry \"" + vocab_[i] + "\"");
    }
  }
}

Tokenizer Tokenizer::build(std::span<const std::string> corpus, std::size_t max_vocab) {
  if (corpus.empty()) throw ValidationError("cannot build a vocabulary from an empty corpus");
  if (max_vocab <= kNumReserved) throw ValidationError("max_vocab must exceed 4");
  std::map<std::string, std::size_t> counts;
  for (const auto& text : corpus) {
    for (auto& t : normalized_tokens(text)) ++counts[std::move(t)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is ordered by key, so a stable sort on frequency keeps ties
  // lexicographic.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> vocab = reserved();
  for (const auto& [tok, n] : ranked) {
    if (vocab.size() >= max_vocab) break;
    if (std::find(reserved().begin(), reserved().end(), tok) != reserved().end()) continue;
    vocab.push_back(tok);
  }
  return Tokenizer(std::move(vocab));
}

TokenId Tokenizer::id_of(std::string_view tok) const {
  const auto it = index_.find(std::string(tok));
  return it == index_.end() ? kUnk : it->second;
}

std::vector<TokenId> Tokenizer::encode(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const auto& t : normalized_tokens(text)) ids.push_back(id_of(t));
  return ids;
}

std::string Tokenizer::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (const TokenId id : ids) {
    if (!out.empty()) out.push_back(' ');
    out += vocab_.at(static_cast<std::size_t>(id));
  }
  return out;
}

}  // namespace claimdpo
