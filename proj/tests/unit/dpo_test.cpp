// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "claimdpo/dpo.hpp"
#include "claimdpo/error.hpp"
#include "unit/test_support.hpp"

namespace claimdpo {
namespace {

using testing::random_pair;
using testing::random_policy;

PolicyDims tiny() { return {9, 2, 3, 4, 2}; }

std::vector<EncodedPair> random_pairs(Rng& rng, std::size_t n, bool extractive) {
  std::vector<EncodedPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(random_pair(rng, 9, extractive, "p" + std::to_string(i)));
  }
  return out;
}

TEST(DpoLoss, KnownValues) {
  EXPECT_NEAR(dpo_loss_from_margin(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(dpo_loss_from_margin(0.1 * 2.0), 0.598139, 1e-6);
  EXPECT_NEAR(dpo_loss_from_margin(-0.2), std::log1p(std::exp(0.2)), 1e-15);
  EXPECT_NEAR(dpo_loss_from_margin(-1000.0), 1000.0, 1e-9);
  EXPECT_GE(dpo_loss_from_margin(1000.0), 0.0);
  EXPECT_LT(dpo_loss_from_margin(1000.0), 1e-300);
}

TEST(DpoLoss, IdenticalPolicyAndReferenceGiveLn2) {
  Rng rng(1);
  const PolicyParams p = random_policy(tiny(), false, rng);
  for (const auto& pair : random_pairs(rng, 40, true)) {
    EXPECT_NEAR(dpo_loss(pair, p, p, 0.1), std::log(2.0), 1e-12);
    const auto r = pair_log_ratios(pair, p, p);
    EXPECT_EQ(r.chosen, 0.0);
    EXPECT_EQ(r.rejected, 0.0);
  }
}

TEST(DpoLoss, MatchesLogRatios) {
  Rng rng(2);
  const PolicyParams p = random_policy(tiny(), false, rng);
  const PolicyParams ref = random_policy(tiny(), false, rng);
  const EncodedPair pair = random_pair(rng, 9, false, "x");
  const double dw = sequence_logprob(p, pair.prompt, pair.chosen) -
                    sequence_logprob(ref, pair.prompt, pair.chosen);
  const double dl = sequence_logprob(p, pair.prompt, pair.rejected) -
                    sequence_logprob(ref, pair.prompt, pair.rejected);
  EXPECT_NEAR(dpo_loss(pair, p, ref, 0.3), std::log1p(std::exp(-0.3 * (dw - dl))), 1e-12);
}

// Mean loss over the batch, the function dpo_grad differentiates.
double batch_loss(std::span<const EncodedPair> batch, const PolicyParams& p,
                  const PolicyParams& ref, double beta) {
  double s = 0;
  for (const auto& pair : batch) s += dpo_loss(pair, p, ref, beta);
  return s / static_cast<double>(batch.size());
}

TEST(DpoGrad, MatchesFiniteDifferences) {
  Rng rng(3);
  for (const bool adapter : {false, true}) {
    PolicyParams p = random_policy(tiny(), adapter, rng);
    PolicyParams ref = random_policy(tiny(), false, rng);
    const auto batch = random_pairs(rng, 3, adapter);
    const DpoGradient g = dpo_grad(batch, p, ref, 0.5);
    EXPECT_NEAR(g.mean_loss, batch_loss(batch, p, ref, 0.5), 1e-12);
    std::vector<double> analytic;
    for_each_tensor(std::as_const(g.grad), [&](TensorKind, std::span<const double> t) {
      analytic.insert(analytic.end(), t.begin(), t.end());
    });
    std::size_t k = 0;
    for_each_tensor(p, [&](TensorKind, std::span<double> t) {
      for (double& v : t) {
        const double saved = v;
        v = saved + 1e-5;
        const double up = batch_loss(batch, p, ref, 0.5);
        v = saved - 1e-5;
        const double down = batch_loss(batch, p, ref, 0.5);
        v = saved;
        const double numeric = (up - down) / 2e-5;
        EXPECT_NEAR(analytic[k], numeric, 1e-7 + 1e-5 * std::abs(numeric)) << "entry " << k;
        ++k;
      }
    });
  }
}

TEST(DpoGrad, AdapterOnlyZeroesBaseTensors) {
  Rng rng(4);
  const PolicyParams p = random_policy(tiny(), true, rng);
  const auto batch = random_pairs(rng, 4, false);
  const DpoGradient g = dpo_grad(batch, p, random_policy(tiny(), false, rng), 0.1, true);
  double adapter_mass = 0;
  for_each_tensor(g.grad, [&](TensorKind k, std::span<const double> t) {
    for (const double v : t) {
      if (is_adapter_tensor(k)) {
        adapter_mass += std::abs(v);
      } else {
        EXPECT_EQ(v, 0.0);
      }
    }
  });
  EXPECT_GT(adapter_mass, 0.0);
}

TEST(DpoGrad, NonFiniteLossNamesThePair) {
  Rng rng(5);
  PolicyParams p = random_policy(tiny(), false, rng);
  const PolicyParams ref = p;
  p.output_b[4] = std::numeric_limits<double>::quiet_NaN();
  std::vector<EncodedPair> batch = {random_pair(rng, 9, false, "claim-17")};
  batch[0].chosen = {4, kEos};
  try {
    dpo_grad(batch, p, ref, 0.1);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("claim-17"), std::string::npos) << e.what();
  }
  EXPECT_THROW(dpo_grad(std::span<const EncodedPair>{}, ref, ref, 0.1), ValidationError);
}

TEST(Clipping, ScalesOnlyAboveTheThreshold) {
  PolicyParams g = zero_policy(tiny());
  g.output_b[0] = 3.0;
  g.hidden_b[1] = 4.0;
  EXPECT_DOUBLE_EQ(global_norm(g), 5.0);
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 10.0), 5.0);
  EXPECT_DOUBLE_EQ(g.output_b[0], 3.0);
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 0.3), 5.0);
  EXPECT_NEAR(global_norm(g), 0.3, 1e-6);
  EXPECT_NEAR(g.output_b[0] / g.hidden_b[1], 0.75, 1e-15);
}

TEST(Schedule, WarmupThenCosine) {
  DpoConfig cfg;
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 0, 100), 0.1);
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 4, 100), 0.5);
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 9, 100), 1.0);
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 10, 100), 1.0);
  EXPECT_NEAR(lr_multiplier(cfg, 55, 100), 0.5, 1e-15);
  EXPECT_NEAR(lr_multiplier(cfg, 99, 100), 0.5 * (1 + std::cos(std::numbers::pi * 89 / 90)),
              1e-15);
  // Two steps: warmup rounds up to one step.
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 0, 2), 1.0);
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 1, 2), 0.5 * (1 + std::cos(std::numbers::pi * 0.0)));
  cfg.schedule = LrSchedule::kConstant;
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 50, 100), 1.0);
  cfg.warmup_ratio = 0.0;
  EXPECT_DOUBLE_EQ(lr_multiplier(cfg, 0, 100), 1.0);
}

TEST(Config, ValidationAndJson) {
  DpoConfig cfg;
  cfg.beta = 0.25;
  cfg.schedule = LrSchedule::kConstant;
  cfg.prior.skip_penalty = 1.5;
  const DpoConfig back = dpo_config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(back.prior, cfg.prior);
  for (auto bad : {+[](DpoConfig& c) { c.beta = 0; }, +[](DpoConfig& c) { c.epochs = 0; },
                   +[](DpoConfig& c) { c.batch_size = 0; },
                   +[](DpoConfig& c) { c.warmup_ratio = 1.5; },
                   +[](DpoConfig& c) { c.learning_rate = -1; }}) {
    DpoConfig c;
    bad(c);
    EXPECT_THROW(validate(c), ValidationError);
  }
  Json j = to_json(DpoConfig{});
  j["schedule"] = "linear";
  EXPECT_THROW(dpo_config_from_json(j), ValidationError);
}

TEST(Train, DeterministicAndReducesLoss) {
  Rng rng(6);
  const PolicyParams p = random_policy(tiny(), false, rng, 0.3);
  const auto pairs = random_pairs(rng, 30, true);
  DpoConfig cfg;
  cfg.epochs = 3;
  cfg.learning_rate = 0.05;
  cfg.shuffle_seed = 9;
  const TrainReport a = train(pairs, p, clone_frozen(p), cfg, pairs);
  const TrainReport b = train(pairs, p, clone_frozen(p), cfg, pairs);
  EXPECT_EQ(a.final_params, b.final_params);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  ASSERT_EQ(a.epoch_loss.size(), 3U);
  EXPECT_EQ(a.steps, 9U);  // ceil(30 / 12) * 3
  EXPECT_NEAR(a.epoch_loss[0], std::log(2.0), 0.05);
  EXPECT_LT(a.epoch_dev_loss.back(), std::log(2.0));
  cfg.shuffle_seed = 10;
  EXPECT_NE(train(pairs, p, clone_frozen(p), cfg).final_params, a.final_params);
}

TEST(Train, AdapterOnlyLeavesBaseTensorsBitwiseUnchanged) {
  Rng rng(7);
  PolicyParams p = random_policy(tiny(), false, rng, 0.3);
  const PolicyParams base = p;
  enable_adapter(p, 2, rng);
  DpoConfig cfg;
  cfg.adapter_only = true;
  const auto pairs = random_pairs(rng, 20, false);
  const TrainReport r = train(pairs, p, clone_frozen(base), cfg);
  EXPECT_EQ(r.final_params.embeddings, base.embeddings);
  EXPECT_EQ(r.final_params.hidden_w, base.hidden_w);
  EXPECT_EQ(r.final_params.hidden_b, base.hidden_b);
  EXPECT_EQ(r.final_params.output_w, base.output_w);
  EXPECT_EQ(r.final_params.output_b, base.output_b);
  EXPECT_NE(r.final_params.adapter_b, p.adapter_b);

  EXPECT_THROW(train(pairs, base, clone_frozen(base), cfg), ValidationError);
  EXPECT_THROW(train(std::span<const EncodedPair>{}, p, clone_frozen(base), DpoConfig{}),
               ValidationError);
}

TEST(Train, ZeroLearningRateIsIdentity) {
  Rng rng(8);
  const PolicyParams p = random_policy(tiny(), false, rng);
  DpoConfig cfg;
  cfg.learning_rate = 0.0;
  const auto pairs = random_pairs(rng, 5, false);
  EXPECT_EQ(train(pairs, p, clone_frozen(p), cfg).final_params, p);
}

}  // namespace
}  // namespace claimdpo
