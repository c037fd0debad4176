// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "claimdpo/error.hpp"

namespace claimdpo {

PolicyParams zero_policy(const PolicyDims& dims, bool with_adapter) {
  PolicyParams p;
  p.dims = dims;
  p.embeddings = Matrix(dims.vocab, dims.embed);
  p.hidden_w = Matrix(dims.context * dims.embed, dims.hidden);
  p.hidden_b.assign(dims.hidden, 0.0);
  p.output_w = Matrix(dims.hidden, dims.vocab);
  p.output_b.assign(dims.vocab, 0.0);
  if (with_adapter) {
    p.adapter_enabled = true;
    p.adapter_a = Matrix(dims.hidden, dims.rank);
    p.adapter_b = Matrix(dims.rank, dims.vocab);
  }
  return p;
}

PolicyParams init_policy(const PolicyDims& dims, Rng& rng) {
  PolicyParams p = zero_policy(dims);
  for (double& v : p.embeddings.data) v = standard_normal(rng);
  const double hidden_scale = 1.0 / std::sqrt(static_cast<double>(dims.context * dims.embed));
  for (double& v : p.hidden_w.data) v = hidden_scale * standard_normal(rng);
  for (double& v : p.output_w.data) v = 0.02 * standard_normal(rng);
  return p;
}

void enable_adapter(PolicyParams& p, std::size_t rank, Rng& rng) {
  p.dims.rank = rank;
  p.adapter_enabled = true;
  p.adapter_a = Matrix(p.dims.hidden, rank);
  p.adapter_b = Matrix(rank, p.dims.vocab);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.dims.hidden));
  for (double& v : p.adapter_a.data) v = scale * standard_normal(rng);
}

void merge_adapter(PolicyParams& p) {
  if (!p.adapter_enabled) return;
  for (std::size_t j = 0; j < p.dims.hidden; ++j) {
    for (std::size_t q = 0; q < p.dims.rank; ++q) {
      const double a = p.adapter_a(j, q);
      if (a == 0.0) continue;
      for (std::size_t v = 0; v < p.dims.vocab; ++v) p.output_w(j, v) += a * p.adapter_b(q, v);
    }
  }
  p.adapter_enabled = false;
  p.adapter_a = Matrix();
  p.adapter_b = Matrix();
}

bool is_adapter_tensor(TensorKind k) {
  return k == TensorKind::kAdapterA || k == TensorKind::kAdapterB;
}

void for_each_tensor(PolicyParams& p,
                     const std::function<void(TensorKind, std::span<double>)>& fn) {
  fn(TensorKind::kEmbeddings, p.embeddings.data);
  fn(TensorKind::kHiddenW, p.hidden_w.data);
  fn(TensorKind::kHiddenB, p.hidden_b);
  fn(TensorKind::kOutputW, p.output_w.data);
  fn(TensorKind::kOutputB, p.output_b);
  if (p.adapter_enabled) {
    fn(TensorKind::kAdapterA, p.adapter_a.data);
    fn(TensorKind::kAdapterB, p.adapter_b.data);
  }
}

void for_each_tensor(const PolicyParams& p,
                     const std::function<void(TensorKind, std::span<const double>)>& fn) {
  fn(TensorKind::kEmbeddings, p.embeddings.data);
  fn(TensorKind::kHiddenW, p.hidden_w.data);
  fn(TensorKind::kHiddenB, p.hidden_b);
  fn(TensorKind::kOutputW, p.output_w.data);
  fn(TensorKind::kOutputB, p.output_b);
  if (p.adapter_enabled) {
    fn(TensorKind::kAdapterA, p.adapter_a.data);
    fn(TensorKind::kAdapterB, p.adapter_b.data);
  }
}

bool all_finite(const PolicyParams& p) {
  bool ok = true;
  for_each_tensor(p, [&](TensorKind, std::span<const double> t) {
    for (const double v : t) ok = ok && std::isfinite(v);
  });
  return ok;
}

namespace {

// Activations of one step, kept for backprop.
struct Step {
  std::vector<TokenId> window;
  std::vector<double> x;       // k*d
  std::vector<double> hidden;  // h, post-tanh
  std::vector<double> mid;     // r, A^T hidden
};

void forward_hidden(const PolicyParams& p, std::span<const TokenId> history, Step& s) {
  const auto& d = p.dims;
  s.window.assign(d.context, kBos);
  const std::size_t take = std::min(d.context, history.size());
  std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
            s.window.end() - static_cast<std::ptrdiff_t>(take));
  s.x.resize(d.context * d.embed);
  for (std::size_t slot = 0; slot < d.context; ++slot) {
    const auto emb = p.embeddings.row(static_cast<std::size_t>(s.window[slot]));
    std::copy(emb.begin(), emb.end(), s.x.begin() + static_cast<std::ptrdiff_t>(slot * d.embed));
  }
  s.hidden = p.hidden_b;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double xi = s.x[i];
    const auto w = p.hidden_w.row(i);
    for (std::size_t j = 0; j < d.hidden; ++j) s.hidden[j] += xi * w[j];
  }
  for (double& h : s.hidden) h = std::tanh(h);
  s.mid.clear();
  if (p.adapter_enabled) {
    s.mid.assign(d.rank, 0.0);
    for (std::size_t j = 0; j < d.hidden; ++j) {
      const auto a = p.adapter_a.row(j);
      for (std::size_t q = 0; q < d.rank; ++q) s.mid[q] += s.hidden[j] * a[q];
    }
  }
}

std::vector<double> full_logits(const PolicyParams& p, const Step& s) {
  std::vector<double> logits = p.output_b;
  for (std::size_t j = 0; j < p.dims.hidden; ++j) {
    const double h = s.hidden[j];
    const auto w = p.output_w.row(j);
    for (std::size_t v = 0; v < logits.size(); ++v) logits[v] += h * w[v];
  }
  for (std::size_t q = 0; q < s.mid.size(); ++q) {
    const double m = s.mid[q];
    const auto b = p.adapter_b.row(q);
    for (std::size_t v = 0; v < logits.size(); ++v) logits[v] += m * b[v];
  }
  return logits;
}

double single_logit(const PolicyParams& p, const Step& s, TokenId tok) {
  const auto v = static_cast<std::size_t>(tok);
  double z = p.output_b[v];
  for (std::size_t j = 0; j < p.dims.hidden; ++j) z += s.hidden[j] * p.output_w(j, v);
  for (std::size_t q = 0; q < s.mid.size(); ++q) z += s.mid[q] * p.adapter_b(q, v);
  return z;
}

// Candidate tokens at one extractive step. Entry 0 is always EOS.
struct Support {
  std::vector<TokenId> tokens;
  std::vector<double> prior;
  std::vector<std::ptrdiff_t> position;
};

Support extractive_support(const CopyConstraint& copy, std::ptrdiff_t cursor) {
  Support s;
  const auto n = static_cast<std::ptrdiff_t>(copy.source.size());
  const bool remaining = cursor + 1 < n;
  // An extraction from a non-empty source keeps at least one word.
  if (cursor >= 0 || n == 0) {
    s.tokens.push_back(kEos);
    s.prior.push_back(remaining ? -copy.prior.eos_penalty : 0.0);
    s.position.push_back(n);
  }
  for (std::ptrdiff_t pos = cursor + 1; pos < n; ++pos) {
    const TokenId t = copy.source[static_cast<std::size_t>(pos)];
    if (t == kEos || std::find(s.tokens.begin(), s.tokens.end(), t) != s.tokens.end()) continue;
    s.tokens.push_back(t);
    s.prior.push_back(-copy.prior.skip_penalty * static_cast<double>(pos - cursor - 1));
    s.position.push_back(pos);
  }
  return s;
}

std::vector<double> softmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

double log_sum_exp(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (const double l : logits) z += std::exp(l - mx);
  return mx + std::log(z);
}

// Logits over the support (extractive) or the full vocabulary.
struct StepLogits {
  std::vector<TokenId> tokens;  // empty for the full vocabulary
  std::vector<std::ptrdiff_t> position;
  std::vector<double> logits;
};

StepLogits step_logits(const PolicyParams& p, const Step& s, const CopyConstraint* copy,
                       std::ptrdiff_t cursor) {
  StepLogits out;
  if (copy == nullptr) {
    out.logits = full_logits(p, s);
    return out;
  }
  Support sup = extractive_support(*copy, cursor);
  out.logits.resize(sup.tokens.size());
  for (std::size_t i = 0; i < sup.tokens.size(); ++i) {
    out.logits[i] = single_logit(p, s, sup.tokens[i]) + sup.prior[i];
  }
  out.tokens = std::move(sup.tokens);
  out.position = std::move(sup.position);
  return out;
}

// Index of `tok` within the step's logits, or -1 when not in the support.
std::ptrdiff_t slot_of(const StepLogits& sl, TokenId tok) {
  if (sl.tokens.empty()) return tok;
  const auto it = std::find(sl.tokens.begin(), sl.tokens.end(), tok);
  return it == sl.tokens.end() ? -1 : it - sl.tokens.begin();
}

void check_completion(std::span<const TokenId> completion) {
  if (completion.empty() || completion.back() != kEos) {
    throw ValidationError("completion must end with EOS");
  }
  if (std::find(completion.begin(), completion.end() - 1, kEos) != completion.end() - 1) {
    throw ValidationError("completion contains EOS before its end");
  }
}

std::vector<TokenId> start_history(std::span<const TokenId> prompt) {
  std::vector<TokenId> h(prompt.begin(), prompt.end());
  h.push_back(kSep);
  return h;
}

void backprop_step(const PolicyParams& p, const Step& s, const StepLogits& sl,
                   std::span<const double> dlogits, PolicyParams& g) {
  const auto& d = p.dims;
  std::vector<double> dh(d.hidden, 0.0);
  std::vector<double> dmid(s.mid.size(), 0.0);
  for (std::size_t i = 0; i < dlogits.size(); ++i) {
    const double gv = dlogits[i];
    if (gv == 0.0) continue;
    const auto v = sl.tokens.empty() ? i : static_cast<std::size_t>(sl.tokens[i]);
    g.output_b[v] += gv;
    for (std::size_t j = 0; j < d.hidden; ++j) {
      g.output_w(j, v) += s.hidden[j] * gv;
      dh[j] += p.output_w(j, v) * gv;
    }
    for (std::size_t q = 0; q < s.mid.size(); ++q) {
      g.adapter_b(q, v) += s.mid[q] * gv;
      dmid[q] += p.adapter_b(q, v) * gv;
    }
  }
  if (!s.mid.empty()) {
    for (std::size_t j = 0; j < d.hidden; ++j) {
      for (std::size_t q = 0; q < d.rank; ++q) {
        g.adapter_a(j, q) += s.hidden[j] * dmid[q];
        dh[j] += p.adapter_a(j, q) * dmid[q];
      }
    }
  }
  std::vector<double> da(d.hidden);
  for (std::size_t j = 0; j < d.hidden; ++j) {
    da[j] = dh[j] * (1.0 - s.hidden[j] * s.hidden[j]);
    g.hidden_b[j] += da[j];
  }
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const auto w = p.hidden_w.row(i);
    auto gw = g.hidden_w.row(i);
    double dx = 0.0;
    for (std::size_t j = 0; j < d.hidden; ++j) {
      gw[j] += s.x[i] * da[j];
      dx += w[j] * da[j];
    }
    const std::size_t slot = i / d.embed;
    const std::size_t c = i % d.embed;
    g.embeddings(static_cast<std::size_t>(s.window[slot]), c) += dx;
  }
}

// Shared driver for sequence_logprob and its gradient. `grad` may be null.
double run_sequence(const PolicyParams& p, std::span<const TokenId> prompt,
                    std::span<const TokenId> completion, const CopyConstraint* copy,
                    double scale, PolicyParams* grad) {
  check_completion(completion);
  std::vector<TokenId> history = start_history(prompt);
  std::ptrdiff_t cursor = -1;
  double total = 0.0;
  Step s;
  for (const TokenId y : completion) {
    forward_hidden(p, history, s);
    const StepLogits sl = step_logits(p, s, copy, cursor);
    const std::ptrdiff_t slot = slot_of(sl, y);
    if (slot < 0) {
      throw ValidationError("completion token " + std::to_string(y) +
                            " is not an ordered extraction of the source");
    }
    const double lse = log_sum_exp(sl.logits);
    total += sl.logits[static_cast<std::size_t>(slot)] - lse;
    if (grad != nullptr) {
      std::vector<double> dl(sl.logits.size());
      for (std::size_t i = 0; i < dl.size(); ++i) dl[i] = -scale * std::exp(sl.logits[i] - lse);
      dl[static_cast<std::size_t>(slot)] += scale;
      backprop_step(p, s, sl, dl, *grad);
    }
    if (copy != nullptr && y != kEos) cursor = sl.position[static_cast<std::size_t>(slot)];
    history.push_back(y);
  }
  return total;
}

}  // namespace

std::vector<double> next_token_distribution(const PolicyParams& p,
                                            std::span<const TokenId> context) {
  Step s;
  forward_hidden(p, context, s);
  return softmax(full_logits(p, s));
}

std::vector<double> next_token_distribution(const PolicyParams& p,
                                            std::span<const TokenId> context,
                                            const CopyConstraint& copy, std::ptrdiff_t cursor) {
  Step s;
  forward_hidden(p, context, s);
  const StepLogits sl = step_logits(p, s, &copy, cursor);
  const auto probs = softmax(sl.logits);
  std::vector<double> out(p.dims.vocab, 0.0);
  for (std::size_t i = 0; i < sl.tokens.size(); ++i) {
    out[static_cast<std::size_t>(sl.tokens[i])] = probs[i];
  }
  return out;
}

double sequence_logprob(const PolicyParams& p, std::span<const TokenId> prompt,
                        std::span<const TokenId> completion, const CopyConstraint* copy) {
  return run_sequence(p, prompt, completion, copy, 0.0, nullptr);
}

double accumulate_logprob_grad(const PolicyParams& p, std::span<const TokenId> prompt,
                               std::span<const TokenId> completion, const CopyConstraint* copy,
                               double scale, PolicyParams& grad) {
  return run_sequence(p, prompt, completion, copy, scale, &grad);
}

void validate(const GenerationParams& gp) {
  if (!(gp.temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (gp.max_new_tokens < 1) throw ValidationError("max_new_tokens must be at least 1");
  if (gp.top_k < 0) throw ValidationError("top_k must be non-negative");
}

std::vector<TokenId> sample(const PolicyParams& p, std::span<const TokenId> prompt,
                            const GenerationParams& gp, const CopyConstraint* copy) {
  validate(gp);
  Rng rng(gp.seed);
  std::vector<TokenId> history = start_history(prompt);
  std::vector<TokenId> out;
  std::ptrdiff_t cursor = -1;
  Step s;
  for (int t = 0; t < gp.max_new_tokens; ++t) {
    forward_hidden(p, history, s);
    const StepLogits sl = step_logits(p, s, copy, cursor);
    std::size_t pick = 0;
    if (gp.greedy) {
      pick = static_cast<std::size_t>(std::max_element(sl.logits.begin(), sl.logits.end()) -
                                      sl.logits.begin());
    } else {
      std::vector<std::size_t> order(sl.logits.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      if (gp.top_k > 0 && static_cast<std::size_t>(gp.top_k) < order.size()) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return sl.logits[a] > sl.logits[b];
        });
        order.resize(static_cast<std::size_t>(gp.top_k));
      }
      std::vector<double> scaled(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        scaled[i] = sl.logits[order[i]] / gp.temperature;
      }
      const auto probs = softmax(scaled);
      const double u = uniform01(rng);
      double acc = 0.0;
      pick = order.back();
      for (std::size_t i = 0; i < order.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
          pick = order[i];
          break;
        }
      }
    }
    const TokenId tok = sl.tokens.empty() ? static_cast<TokenId>(pick) : sl.tokens[pick];
    out.push_back(tok);
    if (tok == kEos) break;
    if (copy != nullptr) cursor = sl.position[pick];
    history.push_back(tok);
  }
  return out;
}

std::string realize_extraction(std::span<const std::string> source_words,
                               std::span<const TokenId> source_ids,
                               std::span<const TokenId> completion) {
  std::string out;
  std::size_t next = 0;
  for (const TokenId t : completion) {
    if (t == kEos) break;
    while (next < source_ids.size() && source_ids[next] != t) ++next;
    if (next == source_ids.size()) {
      throw ValidationError("completion is not an ordered extraction of the source");
    }
    if (!out.empty()) out.push_back(' ');
    out += source_words[next];
    ++next;
  }
  return out;
}

FrozenPolicy clone_frozen(const PolicyParams& p) { return FrozenPolicy(p); }
FrozenPolicy clone_frozen(const FrozenPolicy& p) { return p; }

}  // namespace claimdpo
