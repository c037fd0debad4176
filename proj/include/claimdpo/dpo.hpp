// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "claimdpo/jsonl.hpp"
#include "claimdpo/policy.hpp"

namespace claimdpo {

// A preference pair in token space. `source` is the text the completions
// were extracted from; when empty, scoring is unconstrained.
struct EncodedPair {
  std::string id;
  std::vector<TokenId> prompt;
  std::vector<TokenId> chosen;    // ends with EOS
  std::vector<TokenId> rejected;  // ends with EOS
  std::vector<TokenId> source;
};

enum class LrSchedule { kCosine, kConstant };

struct DpoConfig {
  double beta = 0.1;
  double learning_rate = 1e-2;  // 5e-5 is the large-model setting
  int epochs = 2;
  std::size_t batch_size = 12;
  double warmup_ratio = 0.1;
  LrSchedule schedule = LrSchedule::kCosine;
  double grad_clip_norm = 0.3;
  bool adapter_only = false;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t shuffle_seed = 0;
  ExtractivePrior prior;
};

// Throws ValidationError unless beta > 0, epochs >= 1, batch_size >= 1,
// warmup_ratio in [0,1] and the learning rate is non-negative.
void validate(const DpoConfig& cfg);

Json to_json(const DpoConfig& cfg);
DpoConfig dpo_config_from_json(const Json& j);

// log pi_theta - log pi_ref for the chosen (w) and rejected (l) completion.
struct PairLogRatios {
  double chosen = 0.0;
  double rejected = 0.0;
  double margin(double beta) const { return beta * (chosen - rejected); }
};

PairLogRatios pair_log_ratios(const EncodedPair& pair, const PolicyParams& policy,
                              const PolicyParams& reference, const ExtractivePrior& prior = {});

// -log sigmoid(z), evaluated as softplus(-z).
double dpo_loss_from_margin(double margin);

double dpo_loss(const EncodedPair& pair, const PolicyParams& policy,
                const PolicyParams& reference, double beta, const ExtractivePrior& prior = {});

struct DpoGradient {
  PolicyParams grad;  // mean over the batch, same shape as the policy
  double mean_loss = 0.0;
  double mean_margin = 0.0;
};

// Mean gradient of the loss over a non-empty batch. The reference is read
// only. With adapter_only, every non-adapter entry is zero. Throws Error
// naming the pair if any loss is not finite.
DpoGradient dpo_grad(std::span<const EncodedPair> batch, const PolicyParams& policy,
                     const PolicyParams& reference, double beta, bool adapter_only = false,
                     const ExtractivePrior& prior = {});

double global_norm(const PolicyParams& g);
// Scales g so its global norm is at most max_norm. Returns the pre-clip norm.
double clip_global_norm(PolicyParams& g, double max_norm);

// Learning-rate multiplier for update `step` (0-based) of `total`.
double lr_multiplier(const DpoConfig& cfg, std::size_t step, std::size_t total);

struct TrainReport {
  std::vector<double> epoch_loss;    // mean over the epoch's pairs, pre-update
  std::vector<double> epoch_margin;
  std::vector<double> epoch_dev_loss;  // empty without dev pairs
  std::size_t steps = 0;
  PolicyParams final_params;
};

Json to_json(const TrainReport& r);

// Adam with bias correction, global-norm clipping and warmup + cosine decay,
// over shuffled minibatches. Deterministic given cfg.shuffle_seed.
TrainReport train(std::span<const EncodedPair> pairs, const PolicyParams& policy,
                  const FrozenPolicy& reference, const DpoConfig& cfg,
                  std::span<const EncodedPair> dev_pairs = {});

}  // namespace claimdpo
