// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "claimdpo/error.hpp"
#include "claimdpo/tokenizer.hpp"

namespace claimdpo {
namespace {

TEST(Tokenizer, ReservedIdsAndFrequencyOrder) {
  const std::vector<std::string> corpus = {"b a c", "a b", "a d"};
  const Tokenizer t = Tokenizer::build(corpus, 100);
  ASSERT_EQ(t.size(), 8U);
  EXPECT_EQ(t.vocab()[kBos], "<bos>");
  EXPECT_EQ(t.vocab()[kEos], "<eos>");
  EXPECT_EQ(t.vocab()[kUnk], "<unk>");
  EXPECT_EQ(t.vocab()[kSep], "<sep>");
  // a:3, b:2, then c and d tie at 1 and sort lexicographically.
  EXPECT_EQ(t.vocab()[4], "a");
  EXPECT_EQ(t.vocab()[5], "b");
  EXPECT_EQ(t.vocab()[6], "c");
  EXPECT_EQ(t.vocab()[7], "d");
}

TEST(Tokenizer, CapsVocabularyAndMapsUnknowns) {
  const Tokenizer t = Tokenizer::build(std::vector<std::string>{"a a a b b c"}, 6);
  EXPECT_EQ(t.size(), 6U);
  EXPECT_EQ(t.encode("A, c z b"), (std::vector<TokenId>{4, kUnk, kUnk, 5}));
  EXPECT_EQ(t.decode(t.encode("a b")), "a b");
}

TEST(Tokenizer, Validation) {
  EXPECT_THROW(Tokenizer::build(std::vector<std::string>{}, 10), ValidationError);
  EXPECT_THROW(Tokenizer::build(std::vector<std::string>{"a"}, 4), ValidationError);
  EXPECT_THROW(Tokenizer({"<bos>", "<eos>", "<unk>"}), ValidationError);
  EXPECT_THROW(Tokenizer({"<bos>", "<eos>", "<unk>", "<sep>", "a", "a"}), ValidationError);
  EXPECT_NO_THROW(Tokenizer({"<bos>", "<eos>", "<unk>", "<sep>", "a"}));
}

}  // namespace
}  // namespace claimdpo
