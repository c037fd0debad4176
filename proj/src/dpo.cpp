// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/dpo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "claimdpo/error.hpp"
#include "claimdpo/log.hpp"

namespace claimdpo {
namespace {

struct Tensor {
  TensorKind kind;
  std::span<double> data;
};

std::vector<Tensor> tensors(PolicyParams& p) {
  std::vector<Tensor> out;
  for_each_tensor(p, [&](TensorKind k, std::span<double> t) { out.push_back({k, t}); });
  return out;
}

PolicyParams zeros_like(const PolicyParams& p) {
  return zero_policy(p.dims, p.adapter_enabled);
}

std::optional<CopyConstraint> constraint_for(const EncodedPair& pair,
                                             const ExtractivePrior& prior) {
  if (pair.source.empty()) return std::nullopt;
  return CopyConstraint{pair.source, prior};
}

double logprob(const PolicyParams& p, const EncodedPair& pair, bool chosen,
               const std::optional<CopyConstraint>& copy) {
  return sequence_logprob(p, pair.prompt, chosen ? pair.chosen : pair.rejected,
                          copy ? &*copy : nullptr);
}

double sigmoid_neg(double z) {
  // sigma(-z) = 1 / (1 + e^z), split by sign to avoid overflow.
  if (z >= 0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

struct RefLogprobs {
  double chosen = 0.0;
  double rejected = 0.0;
};

// Adds the batch-mean gradient of every pair into `grad`; returns summed
// loss and margin.
std::pair<double, double> accumulate_batch(std::span<const EncodedPair* const> batch,
                                           std::span<const RefLogprobs> ref,
                                           const PolicyParams& policy, double beta,
                                           const ExtractivePrior& prior, PolicyParams& grad) {
  double loss_sum = 0.0;
  double margin_sum = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const EncodedPair& pair = *batch[i];
    const auto copy = constraint_for(pair, prior);
    const double lw = logprob(policy, pair, true, copy);
    const double ll = logprob(policy, pair, false, copy);
    const double margin = beta * ((lw - ref[i].chosen) - (ll - ref[i].rejected));
    const double loss = dpo_loss_from_margin(margin);
    if (!std::isfinite(loss)) {
      throw Error("DPO loss is not finite for pair \"" + pair.id + "\" (margin " +
                  std::to_string(margin) + ")");
    }
    loss_sum += loss;
    margin_sum += margin;
    // dL/dz = -sigma(-z); z = beta * (logpi(y_w) - logpi(y_l)) + const.
    const double coeff = sigmoid_neg(margin) * beta * inv_n;
    const CopyConstraint* c = copy ? &*copy : nullptr;
    accumulate_logprob_grad(policy, pair.prompt, pair.chosen, c, -coeff, grad);
    accumulate_logprob_grad(policy, pair.prompt, pair.rejected, c, coeff, grad);
  }
  return {loss_sum, margin_sum};
}

void zero_non_adapter(PolicyParams& g) {
  for (auto& t : tensors(g)) {
    if (!is_adapter_tensor(t.kind)) std::fill(t.data.begin(), t.data.end(), 0.0);
  }
}

}  // namespace

void validate(const DpoConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw ValidationError("beta must be positive");
  if (cfg.epochs < 1) throw ValidationError("epochs must be at least 1");
  if (cfg.batch_size < 1) throw ValidationError("batch_size must be at least 1");
  if (!(cfg.warmup_ratio >= 0.0 && cfg.warmup_ratio <= 1.0)) {
    throw ValidationError("warmup_ratio must lie in [0,1]");
  }
  if (!(cfg.learning_rate >= 0.0)) throw ValidationError("learning_rate must be non-negative");
  if (!(cfg.grad_clip_norm > 0.0)) throw ValidationError("grad_clip_norm must be positive");
}

Json to_json(const DpoConfig& cfg) {
  return Json{{"beta", cfg.beta},
              {"learning_rate", cfg.learning_rate},
              {"epochs", cfg.epochs},
              {"batch_size", cfg.batch_size},
              {"warmup_ratio", cfg.warmup_ratio},
              {"schedule", cfg.schedule == LrSchedule::kCosine ? "cosine" : "constant"},
              {"grad_clip_norm", cfg.grad_clip_norm},
              {"adapter_only", cfg.adapter_only},
              {"adam_beta1", cfg.adam_beta1},
              {"adam_beta2", cfg.adam_beta2},
              {"adam_eps", cfg.adam_eps},
              {"shuffle_seed", cfg.shuffle_seed},
              {"skip_penalty", cfg.prior.skip_penalty},
              {"eos_penalty", cfg.prior.eos_penalty}};
}

DpoConfig dpo_config_from_json(const Json& j) {
  DpoConfig c;
  c.beta = j.value("beta", c.beta);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.warmup_ratio = j.value("warmup_ratio", c.warmup_ratio);
  const std::string sched = j.value("schedule", std::string("cosine"));
  if (sched != "cosine" && sched != "constant") {
    throw ValidationError("unknown schedule \"" + sched + "\"");
  }
  c.schedule = sched == "cosine" ? LrSchedule::kCosine : LrSchedule::kConstant;
  c.grad_clip_norm = j.value("grad_clip_norm", c.grad_clip_norm);
  c.adapter_only = j.value("adapter_only", c.adapter_only);
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.adam_eps = j.value("adam_eps", c.adam_eps);
  c.shuffle_seed = j.value("shuffle_seed", c.shuffle_seed);
  c.prior.skip_penalty = j.value("skip_penalty", c.prior.skip_penalty);
  c.prior.eos_penalty = j.value("eos_penalty", c.prior.eos_penalty);
  validate(c);
  return c;
}

PairLogRatios pair_log_ratios(const EncodedPair& pair, const PolicyParams& policy,
                              const PolicyParams& reference, const ExtractivePrior& prior) {
  const auto copy = constraint_for(pair, prior);
  return {logprob(policy, pair, true, copy) - logprob(reference, pair, true, copy),
          logprob(policy, pair, false, copy) - logprob(reference, pair, false, copy)};
}

double dpo_loss_from_margin(double margin) {
  // softplus(-z) = max(-z, 0) + log1p(exp(-|z|))
  return std::max(-margin, 0.0) + std::log1p(std::exp(-std::abs(margin)));
}

double dpo_loss(const EncodedPair& pair, const PolicyParams& policy,
                const PolicyParams& reference, double beta, const ExtractivePrior& prior) {
  return dpo_loss_from_margin(pair_log_ratios(pair, policy, reference, prior).margin(beta));
}

DpoGradient dpo_grad(std::span<const EncodedPair> batch, const PolicyParams& policy,
                     const PolicyParams& reference, double beta, bool adapter_only,
                     const ExtractivePrior& prior) {
  if (batch.empty()) throw ValidationError("dpo_grad: empty batch");
  std::vector<const EncodedPair*> ptrs;
  std::vector<RefLogprobs> ref;
  for (const auto& pair : batch) {
    const auto copy = constraint_for(pair, prior);
    ptrs.push_back(&pair);
    ref.push_back({logprob(reference, pair, true, copy), logprob(reference, pair, false, copy)});
  }
  DpoGradient out{zeros_like(policy), 0.0, 0.0};
  const auto [loss, margin] = accumulate_batch(ptrs, ref, policy, beta, prior, out.grad);
  if (adapter_only) zero_non_adapter(out.grad);
  out.mean_loss = loss / static_cast<double>(batch.size());
  out.mean_margin = margin / static_cast<double>(batch.size());
  return out;
}

double global_norm(const PolicyParams& g) {
  double sq = 0.0;
  for_each_tensor(g, [&](TensorKind, std::span<const double> t) {
    for (const double v : t) sq += v * v;
  });
  return std::sqrt(sq);
}

double clip_global_norm(PolicyParams& g, double max_norm) {
  const double norm = global_norm(g);
  if (norm > max_norm) {
    const double s = max_norm / (norm + 1e-6);
    for (auto& t : tensors(g)) {
      for (double& v : t.data) v *= s;
    }
  }
  return norm;
}

double lr_multiplier(const DpoConfig& cfg, std::size_t step, std::size_t total) {
  const auto warm = static_cast<std::size_t>(
      std::ceil(cfg.warmup_ratio * static_cast<double>(total)));
  if (step < warm) return static_cast<double>(step + 1) / static_cast<double>(warm);
  if (cfg.schedule == LrSchedule::kConstant || total <= warm) return 1.0;
  const double progress =
      static_cast<double>(step - warm) / static_cast<double>(total - warm);
  return 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

Json to_json(const TrainReport& r) {
  return Json{{"epoch_loss", r.epoch_loss},
              {"epoch_margin", r.epoch_margin},
              {"epoch_dev_loss", r.epoch_dev_loss},
              {"steps", r.steps}};
}

TrainReport train(std::span<const EncodedPair> pairs, const PolicyParams& policy,
                  const FrozenPolicy& reference, const DpoConfig& cfg,
                  std::span<const EncodedPair> dev_pairs) {
  validate(cfg);
  if (pairs.empty()) throw ValidationError("train: preference dataset is empty");
  if (cfg.adapter_only && !policy.adapter_enabled) {
    throw ValidationError("train: adapter_only requires an enabled adapter");
  }
  const PolicyParams& ref_params = reference.params();

  std::vector<RefLogprobs> ref(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto copy = constraint_for(pairs[i], cfg.prior);
    ref[i] = {logprob(ref_params, pairs[i], true, copy),
              logprob(ref_params, pairs[i], false, copy)};
  }

  TrainReport report;
  report.final_params = policy;
  PolicyParams& params = report.final_params;
  PolicyParams m = zeros_like(params);
  PolicyParams v = zeros_like(params);
  auto p_t = tensors(params);
  auto m_t = tensors(m);
  auto v_t = tensors(v);

  const std::size_t per_epoch = (pairs.size() + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total = per_epoch * static_cast<std::size_t>(cfg.epochs);
  std::size_t step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(cfg.shuffle_seed, static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }

    double loss_sum = 0.0;
    double margin_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<const EncodedPair*> batch;
      std::vector<RefLogprobs> batch_ref;
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&pairs[order[i]]);
        batch_ref.push_back(ref[order[i]]);
      }
      PolicyParams g = zeros_like(params);
      const auto [loss, margin] =
          accumulate_batch(batch, batch_ref, params, cfg.beta, cfg.prior, g);
      loss_sum += loss;
      margin_sum += margin;
      if (cfg.adapter_only) zero_non_adapter(g);
      clip_global_norm(g, cfg.grad_clip_norm);

      ++step;
      const double lr = cfg.learning_rate * lr_multiplier(cfg, step - 1, total);
      const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
      auto g_t = tensors(g);
      for (std::size_t t = 0; t < p_t.size(); ++t) {
        if (cfg.adapter_only && !is_adapter_tensor(p_t[t].kind)) continue;
        auto pd = p_t[t].data;
        auto md = m_t[t].data;
        auto vd = v_t[t].data;
        const auto gd = g_t[t].data;
        for (std::size_t i = 0; i < pd.size(); ++i) {
          md[i] = cfg.adam_beta1 * md[i] + (1.0 - cfg.adam_beta1) * gd[i];
          vd[i] = cfg.adam_beta2 * vd[i] + (1.0 - cfg.adam_beta2) * gd[i] * gd[i];
          const double mhat = md[i] / bc1;
          const double vhat = vd[i] / bc2;
          pd[i] -= lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
        }
      }
    }
    report.epoch_loss.push_back(loss_sum / static_cast<double>(pairs.size()));
    report.epoch_margin.push_back(margin_sum / static_cast<double>(pairs.size()));
    if (!dev_pairs.empty()) {
      double dev = 0.0;
      for (const auto& pair : dev_pairs) {
        dev += dpo_loss(pair, params, ref_params, cfg.beta, cfg.prior);
      }
      report.epoch_dev_loss.push_back(dev / static_cast<double>(dev_pairs.size()));
    }
    log(LogLevel::kInfo, "dpo epoch {}: loss {:.6f} margin {:.6f}", epoch + 1,
        report.epoch_loss.back(), report.epoch_margin.back());
  }
  if (!all_finite(params)) throw Error("train: parameters became non-finite");
  report.steps = step;
  return report;
}

}  // namespace claimdpo
