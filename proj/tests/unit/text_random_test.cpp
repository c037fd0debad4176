// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "claimdpo/random.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {
namespace {

using Strings = std::vector<std::string>;

TEST(WordTokens, SplitsOnPunctuationAndKeepsJoinedWords) {
  EXPECT_EQ(word_tokens("Vitamin D doesn't cure COVID-19!"),
            (Strings{"Vitamin", "D", "doesn't", "cure", "COVID-19"}));
  EXPECT_EQ(word_tokens("#health @who  snake_case -dash trailing- 'quote'"),
            (Strings{"#health", "@who", "snake_case", "dash", "trailing", "quote"}));
  EXPECT_TRUE(word_tokens("  ...  ").empty());
}

TEST(WordTokens, NormalizedLowercases) {
  EXPECT_EQ(normalized_tokens("The CAT sat."), (Strings{"the", "cat", "sat"}));
}

TEST(TextHelpers, WhitespaceUtilities) {
  EXPECT_EQ(trim("  a b \n"), "a b");
  EXPECT_EQ(collapse_whitespace("  a \t b\n\nc "), "a b c");
  EXPECT_EQ(whitespace_word_count(" a  b\tc "), 3U);
  EXPECT_EQ(whitespace_word_count(""), 0U);
  EXPECT_TRUE(starts_with_ci("Here Is", "here"));
  EXPECT_FALSE(starts_with_ci("He", "here"));
}

TEST(TextHelpers, NegationCues) {
  for (const char* w : {"not", "no", "never", "without", "cannot", "doesn't", "isn't"}) {
    EXPECT_TRUE(is_negation_cue(w)) << w;
  }
  for (const char* w : {"note", "know", "nothing", "n't"}) EXPECT_FALSE(is_negation_cue(w)) << w;
}

TEST(Random, MixSeedIsDeterministicAndSpreads) {
  EXPECT_EQ(mix_seed(42, "c0001"), mix_seed(42, "c0001"));
  EXPECT_NE(mix_seed(42, "c0001"), mix_seed(42, "c0002"));
  EXPECT_NE(mix_seed(42, "c0001"), mix_seed(43, "c0001"));
  EXPECT_NE(mix_seed(1, std::uint64_t{2}), mix_seed(2, std::uint64_t{1}));
}

TEST(Random, UniformIndexCoversRangeWithinThreeSigma) {
  // 20 buckets, 20000 draws: each count is Binomial(20000, 1/20).
  Rng rng(1234);
  constexpr std::size_t kBuckets = 20;
  constexpr double kDraws = 20000;
  std::vector<int> counts(kBuckets, 0);
  for (int i = 0; i < static_cast<int>(kDraws); ++i) ++counts[uniform_index(rng, kBuckets)];
  const double mean = kDraws / kBuckets;
  const double sd = std::sqrt(kDraws * (1.0 / kBuckets) * (1.0 - 1.0 / kBuckets));
  for (const int c : counts) EXPECT_LT(std::abs(c - mean), 3.0 * sd + 1.0);
}

TEST(Random, Uniform01AndNormalMoments) {
  Rng rng(99);
  double s = 0, s2 = 0;
  constexpr int kN = 20000;
  for (int i = 0; i < kN; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / kN, 0.0, 0.05);
  EXPECT_NEAR(s2 / kN, 1.0, 0.05);
}

TEST(Random, SameSeedSameStream) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(uniform_index(a, 1000), uniform_index(b, 1000));
}

}  // namespace
}  // namespace claimdpo
