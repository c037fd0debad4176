// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "claimdpo/error.hpp"
#include "claimdpo/policy.hpp"
#include "unit/test_support.hpp"

namespace claimdpo {
namespace {

using testing::random_extraction;
using testing::random_policy;
using testing::random_tokens;

PolicyDims tiny(std::size_t vocab = 10) { return {vocab, 3, 4, 5, 2}; }

TEST(Policy, ZeroModelIsUniform) {
  const PolicyParams p = zero_policy(tiny(10));
  const std::vector<TokenId> prompt = {4, 5};
  const std::vector<TokenId> completion = {6, 7, kEos};
  EXPECT_NEAR(sequence_logprob(p, prompt, completion), -3.0 * std::log(10.0), 1e-12);
  EXPECT_NEAR(sequence_logprob(p, prompt, completion), -6.907755, 1e-6);
  for (const double q : next_token_distribution(p, prompt)) EXPECT_NEAR(q, 0.1, 1e-15);
}

// Independent forward pass: BOS-padded window, tanh layer, softmax.
std::vector<double> hand_distribution(const PolicyParams& p, const std::vector<TokenId>& ctx) {
  const auto& d = p.dims;
  std::vector<TokenId> window(d.context, kBos);
  for (std::size_t i = 0; i < std::min(d.context, ctx.size()); ++i) {
    window[d.context - 1 - i] = ctx[ctx.size() - 1 - i];
  }
  std::vector<double> x;
  for (const TokenId t : window) {
    for (std::size_t j = 0; j < d.embed; ++j) x.push_back(p.embeddings(t, j));
  }
  std::vector<double> h(d.hidden);
  for (std::size_t j = 0; j < d.hidden; ++j) {
    double a = p.hidden_b[j];
    for (std::size_t i = 0; i < x.size(); ++i) a += x[i] * p.hidden_w(i, j);
    h[j] = std::tanh(a);
  }
  std::vector<double> z(d.vocab);
  double total = 0;
  for (std::size_t v = 0; v < d.vocab; ++v) {
    double a = p.output_b[v];
    for (std::size_t j = 0; j < d.hidden; ++j) {
      double w = p.output_w(j, v);
      if (p.adapter_enabled) {
        for (std::size_t r = 0; r < d.rank; ++r) w += p.adapter_a(j, r) * p.adapter_b(r, v);
      }
      a += h[j] * w;
    }
    z[v] = std::exp(a);
    total += z[v];
  }
  for (double& q : z) q /= total;
  return z;
}

TEST(Policy, MatchesHandComputedChainRule) {
  Rng rng(12);
  for (const bool adapter : {false, true}) {
    const PolicyParams p = random_policy({6, 2, 2, 3, 1}, adapter, rng, 0.8);
    const std::vector<TokenId> prompt = {4, 5, 4};
    const std::vector<TokenId> completion = {5, 4, kEos};
    std::vector<TokenId> ctx = prompt;
    ctx.push_back(kSep);
    double want = 0;
    for (const TokenId t : completion) {
      const auto dist = hand_distribution(p, ctx);
      const auto got = next_token_distribution(p, ctx);
      for (std::size_t v = 0; v < dist.size(); ++v) EXPECT_NEAR(got[v], dist[v], 1e-12);
      want += std::log(dist[static_cast<std::size_t>(t)]);
      ctx.push_back(t);
    }
    EXPECT_NEAR(sequence_logprob(p, prompt, completion), want, 1e-12);
  }
}

TEST(Policy, DistributionsAreNormalized) {
  Rng rng(1);
  const PolicyParams p = random_policy(tiny(12), true, rng, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ctx = random_tokens(rng, 12, 1 + uniform_index(rng, 6));
    const auto dist = next_token_distribution(p, ctx);
    EXPECT_NEAR(std::accumulate(dist.begin(), dist.end(), 0.0), 1.0, 1e-12);
    for (const double q : dist) EXPECT_GT(q, 0.0);
  }
}

TEST(Policy, ExtractiveSupportAndPrior) {
  const PolicyParams p = zero_policy(tiny(10));
  const std::vector<TokenId> source = {4, 5, 4, 6};
  const CopyConstraint copy{source, {1.0, 4.0}};
  const std::vector<TokenId> ctx = {kSep};

  // First step: no EOS; tokens 4 (pos 0), 5 (pos 1, one skip), 6 (pos 3).
  auto d = next_token_distribution(p, ctx, copy, -1);
  EXPECT_EQ(d[kEos], 0.0);
  const double z = 1 + std::exp(-1.0) + std::exp(-3.0);
  EXPECT_NEAR(d[4], 1 / z, 1e-12);
  EXPECT_NEAR(d[5], std::exp(-1.0) / z, 1e-12);
  EXPECT_NEAR(d[6], std::exp(-3.0) / z, 1e-12);
  for (TokenId t : {0, 2, 3, 7, 8, 9}) EXPECT_EQ(d[t], 0.0);

  // After consuming position 1: 4 (pos 2), 6 (pos 3, one skip), EOS.
  d = next_token_distribution(p, ctx, copy, 1);
  const double z2 = 1 + std::exp(-1.0) + std::exp(-4.0);
  EXPECT_NEAR(d[4], 1 / z2, 1e-12);
  EXPECT_NEAR(d[kEos], std::exp(-4.0) / z2, 1e-12);
  EXPECT_EQ(d[5], 0.0);

  // Source exhausted: only EOS.
  d = next_token_distribution(p, ctx, copy, 3);
  EXPECT_DOUBLE_EQ(d[kEos], 1.0);
}

TEST(Policy, ExtractiveLogprobValidatesCompletion) {
  const PolicyParams p = zero_policy(tiny(10));
  const std::vector<TokenId> source = {4, 5, 6};
  const CopyConstraint copy{source, {}};
  const std::vector<TokenId> prompt = {7};
  EXPECT_NO_THROW(sequence_logprob(p, prompt, std::vector<TokenId>{4, 6, kEos}, &copy));
  EXPECT_THROW(sequence_logprob(p, prompt, std::vector<TokenId>{6, 4, kEos}, &copy),
               ValidationError);
  EXPECT_THROW(sequence_logprob(p, prompt, std::vector<TokenId>{9, kEos}, &copy), ValidationError);
  EXPECT_THROW(sequence_logprob(p, prompt, std::vector<TokenId>{kEos}, &copy), ValidationError);
  EXPECT_THROW(sequence_logprob(p, prompt, std::vector<TokenId>{4, 5}), ValidationError);
  EXPECT_THROW(sequence_logprob(p, prompt, std::vector<TokenId>{4, kEos, 5, kEos}),
               ValidationError);
}

// Central differences of sequence_logprob against accumulate_logprob_grad.
void check_logprob_gradient(const PolicyParams& p, const std::vector<TokenId>& prompt,
                            const std::vector<TokenId>& completion, const CopyConstraint* copy) {
  PolicyParams grad = zero_policy(p.dims, p.adapter_enabled);
  const double lp = accumulate_logprob_grad(p, prompt, completion, copy, 1.0, grad);
  EXPECT_NEAR(lp, sequence_logprob(p, prompt, completion, copy), 1e-12);

  std::vector<double> analytic;
  for_each_tensor(std::as_const(grad), [&](TensorKind, std::span<const double> t) {
    analytic.insert(analytic.end(), t.begin(), t.end());
  });
  PolicyParams q = p;
  std::size_t k = 0;
  constexpr double kStep = 1e-5;
  for_each_tensor(q, [&](TensorKind, std::span<double> t) {
    for (double& v : t) {
      const double saved = v;
      v = saved + kStep;
      const double up = sequence_logprob(q, prompt, completion, copy);
      v = saved - kStep;
      const double down = sequence_logprob(q, prompt, completion, copy);
      v = saved;
      const double numeric = (up - down) / (2 * kStep);
      EXPECT_NEAR(analytic[k], numeric, 1e-6 + 1e-5 * std::abs(numeric)) << "entry " << k;
      ++k;
    }
  });
  EXPECT_EQ(k, analytic.size());
}

TEST(Policy, LogprobGradientMatchesFiniteDifferences) {
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const bool adapter = trial % 2 == 1;
    const PolicyParams p = random_policy(tiny(9), adapter, rng);
    const auto prompt = random_tokens(rng, 9, 3);
    auto completion = random_tokens(rng, 9, 3);
    completion.push_back(kEos);
    check_logprob_gradient(p, prompt, completion, nullptr);

    const auto source = random_tokens(rng, 9, 5);
    const auto extraction = random_extraction(rng, source);
    const CopyConstraint copy{source, {1.5, 3.0}};
    check_logprob_gradient(p, prompt, extraction, &copy);
  }
}

TEST(Policy, GradientScaleIsLinear) {
  Rng rng(2);
  const PolicyParams p = random_policy(tiny(8), false, rng);
  const std::vector<TokenId> prompt = {4}, completion = {5, 6, kEos};
  PolicyParams g1 = zero_policy(p.dims), g2 = zero_policy(p.dims);
  accumulate_logprob_grad(p, prompt, completion, nullptr, 1.0, g1);
  accumulate_logprob_grad(p, prompt, completion, nullptr, -2.5, g2);
  for (std::size_t i = 0; i < g1.output_w.data.size(); ++i) {
    EXPECT_NEAR(g2.output_w.data[i], -2.5 * g1.output_w.data[i], 1e-12);
  }
}

TEST(Adapter, FreshAdapterLeavesOutputsUnchangedAndMergeIsExact) {
  Rng rng(4);
  const PolicyParams base = random_policy(tiny(10), false, rng);
  PolicyParams with = base;
  enable_adapter(with, 2, rng);
  ASSERT_TRUE(with.adapter_enabled);
  const std::vector<TokenId> ctx = {4, 5, 6};
  EXPECT_EQ(next_token_distribution(base, ctx), next_token_distribution(with, ctx));

  for (double& v : with.adapter_b.data) v = standard_normal(rng);
  const auto before = next_token_distribution(with, ctx);
  PolicyParams merged = with;
  merge_adapter(merged);
  EXPECT_FALSE(merged.adapter_enabled);
  const auto after = next_token_distribution(merged, ctx);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
}

TEST(Adapter, TensorVisitOrderAndKinds) {
  PolicyParams p = zero_policy(tiny(10), true);
  std::vector<TensorKind> kinds;
  for_each_tensor(p, [&](TensorKind k, std::span<double>) { kinds.push_back(k); });
  ASSERT_EQ(kinds.size(), 7U);
  EXPECT_TRUE(is_adapter_tensor(kinds[5]));
  EXPECT_TRUE(is_adapter_tensor(kinds[6]));
  EXPECT_FALSE(is_adapter_tensor(kinds[0]));
  p.adapter_enabled = false;
  kinds.clear();
  for_each_tensor(p, [&](TensorKind k, std::span<double>) { kinds.push_back(k); });
  EXPECT_EQ(kinds.size(), 5U);
}

TEST(Sampling, DeterministicPerSeedAndRespectsLimits) {
  Rng rng(8);
  const PolicyParams p = random_policy(tiny(12), false, rng, 1.0);
  const std::vector<TokenId> prompt = {4, 5};
  GenerationParams gp;
  gp.seed = 77;
  gp.max_new_tokens = 6;
  const auto a = sample(p, prompt, gp);
  EXPECT_EQ(a, sample(p, prompt, gp));
  EXPECT_LE(a.size(), 6U);
  gp.seed = 78;
  bool differs = false;
  for (int s = 0; s < 10 && !differs; ++s) {
    gp.seed = 100 + s;
    differs = sample(p, prompt, gp) != a;
  }
  EXPECT_TRUE(differs);

  gp.temperature = 0.0;
  EXPECT_THROW(sample(p, prompt, gp), ValidationError);
  gp.temperature = 1.0;
  gp.max_new_tokens = 0;
  EXPECT_THROW(sample(p, prompt, gp), ValidationError);
}

TEST(Sampling, ExtractiveSamplesAreValidExtractions) {
  Rng rng(9);
  const PolicyParams p = random_policy(tiny(12), false, rng, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto source = random_tokens(rng, 12, 1 + uniform_index(rng, 8));
    const CopyConstraint copy{source, {}};
    GenerationParams gp;
    gp.seed = static_cast<std::uint64_t>(trial);
    const auto out = sample(p, std::vector<TokenId>{4}, gp, &copy);
    ASSERT_FALSE(out.empty());
    ASSERT_EQ(out.back(), kEos);
    ASSERT_GE(out.size(), 2U);  // at least one word
    EXPECT_NO_THROW(sequence_logprob(p, std::vector<TokenId>{4}, out, &copy));
  }
}

TEST(Sampling, GreedyFollowsTheArgmax) {
  const PolicyParams p = zero_policy(tiny(10));
  const std::vector<TokenId> source = {4, 5, 6};
  const CopyConstraint copy{source, {2.0, 4.0}};
  GenerationParams gp;
  gp.greedy = true;
  // Uniform logits: the prior alone picks every source token in order.
  EXPECT_EQ(sample(p, std::vector<TokenId>{7}, gp, &copy),
            (std::vector<TokenId>{4, 5, 6, kEos}));
}

TEST(RealizeExtraction, RecoversSurfaceWordsIncludingUnknowns) {
  const std::vector<std::string> words = {"Wow", "Zinc", "lozenges", "cure", "colds"};
  const std::vector<TokenId> ids = {kUnk, 4, 5, 6, kUnk};
  EXPECT_EQ(realize_extraction(words, ids, std::vector<TokenId>{4, 6, kUnk, kEos}),
            "Zinc cure colds");
  EXPECT_EQ(realize_extraction(words, ids, std::vector<TokenId>{kUnk, 5, kEos}), "Wow lozenges");
  EXPECT_THROW(realize_extraction(words, ids, std::vector<TokenId>{6, 4, kEos}), ValidationError);
}

TEST(FrozenPolicy, CopiesAreIndependentOfTheSource) {
  Rng rng(6);
  PolicyParams p = random_policy(tiny(8), false, rng);
  const FrozenPolicy frozen = clone_frozen(p);
  const FrozenPolicy again = clone_frozen(frozen);
  p.output_b[0] += 1.0;
  EXPECT_NE(frozen.params(), p);
  EXPECT_EQ(&frozen.params(), &again.params());
}

TEST(Init, ShapesAndScales) {
  Rng rng(10);
  const PolicyDims d{50, 8, 32, 64, 8};
  const PolicyParams p = init_policy(d, rng);
  EXPECT_EQ(p.embeddings.rows, 50U);
  EXPECT_EQ(p.hidden_w.rows, 8U * 32U);
  EXPECT_EQ(p.output_w.cols, 50U);
  EXPECT_FALSE(p.adapter_enabled);
  EXPECT_TRUE(all_finite(p));
  double s2 = 0;
  for (const double v : p.output_w.data) s2 += v * v;
  EXPECT_NEAR(std::sqrt(s2 / static_cast<double>(p.output_w.data.size())), 0.02, 0.002);
  EXPECT_TRUE(std::all_of(p.output_b.begin(), p.output_b.end(), [](double v) { return v == 0; }));
}

}  // namespace
}  // namespace claimdpo
