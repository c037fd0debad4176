// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "claimdpo/random.hpp"
#include "claimdpo/tokenizer.hpp"

namespace claimdpo {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

struct PolicyDims {
  std::size_t vocab = 0;
  std::size_t context = 8;   // k, tokens in the window
  std::size_t embed = 32;    // d
  std::size_t hidden = 64;   // h
  std::size_t rank = 8;      // r, adapter rank

  bool operator==(const PolicyDims&) const = default;
};

// Fixed-window neural n-gram head: the last k token embeddings are
// concatenated, passed through one tanh layer and projected onto the
// vocabulary. The optional adapter adds A*B to the output projection.
//
// The same struct doubles as the gradient container for training.
struct PolicyParams {
  PolicyDims dims;
  Matrix embeddings;  // vocab x d
  Matrix hidden_w;    // (k*d) x h
  std::vector<double> hidden_b;  // h
  Matrix output_w;    // h x vocab
  std::vector<double> output_b;  // vocab
  bool adapter_enabled = false;
  Matrix adapter_a;   // h x r
  Matrix adapter_b;   // r x vocab

  bool operator==(const PolicyParams&) const = default;
};

// All-zero parameters (and gradients) of the given shape.
PolicyParams zero_policy(const PolicyDims& dims, bool with_adapter = false);
// Gaussian init: embeddings N(0,1), hidden weights N(0, 1/(k*d)), output
// weights N(0, 0.02^2), biases zero. No adapter.
PolicyParams init_policy(const PolicyDims& dims, Rng& rng);

// Fresh adapter: A ~ N(0, 1/h), B = 0, so the initial contribution is
// exactly zero.
void enable_adapter(PolicyParams& p, std::size_t rank, Rng& rng);
// Folds A*B into output_w and removes the adapter.
void merge_adapter(PolicyParams& p);

enum class TensorKind { kEmbeddings, kHiddenW, kHiddenB, kOutputW, kOutputB, kAdapterA, kAdapterB };

bool is_adapter_tensor(TensorKind k);

// Visits every parameter tensor in a fixed order. Adapter tensors are
// visited only when enabled.
void for_each_tensor(PolicyParams& p, const std::function<void(TensorKind, std::span<double>)>& fn);
void for_each_tensor(const PolicyParams& p,
                     const std::function<void(TensorKind, std::span<const double>)>& fn);

bool all_finite(const PolicyParams& p);

// Restricts decoding to an ordered extraction from `source`: after emitting
// a token the cursor moves to that token's first occurrence past the
// previous cursor. The support at each step is EOS plus every distinct token
// still ahead of the cursor; EOS is withheld at the first step unless the
// source is empty. Fixed logit offsets steer toward copying in
// order: -skip_penalty per skipped source position, -eos_penalty for EOS
// (when source tokens remain).
struct ExtractivePrior {
  double skip_penalty = 2.0;
  double eos_penalty = 4.0;

  bool operator==(const ExtractivePrior&) const = default;
};

struct CopyConstraint {
  std::span<const TokenId> source;
  ExtractivePrior prior;
};

// Softmax over the whole vocabulary for the next token given `context`
// (left-padded with BOS to k tokens). Sums to 1, every entry positive.
std::vector<double> next_token_distribution(const PolicyParams& p,
                                            std::span<const TokenId> context);

// Same, with the extractive support restriction applied. `cursor` is the
// index of the last consumed source position (-1 before the first step).
// Entries outside the support are exactly 0.
std::vector<double> next_token_distribution(const PolicyParams& p,
                                            std::span<const TokenId> context,
                                            const CopyConstraint& copy, std::ptrdiff_t cursor);

// log pi(completion | prompt): conditions each step on
// prompt ++ SEP ++ completion-so-far and sums log-softmax values. The
// completion must end with EOS. With a copy constraint, throws
// ValidationError if the completion is not an ordered extraction of the
// source.
double sequence_logprob(const PolicyParams& p, std::span<const TokenId> prompt,
                        std::span<const TokenId> completion,
                        const CopyConstraint* copy = nullptr);

// Adds scale * d/dtheta sequence_logprob(...) into `grad` (which must have
// the shape of `p`) and returns the log-probability.
double accumulate_logprob_grad(const PolicyParams& p, std::span<const TokenId> prompt,
                               std::span<const TokenId> completion, const CopyConstraint* copy,
                               double scale, PolicyParams& grad);

struct GenerationParams {
  int max_new_tokens = 64;
  double temperature = 0.7;
  int top_k = 20;      // 0 means unlimited
  bool greedy = false; // the temperature -> 0 limit
  std::uint64_t seed = 0;
};

// Throws ValidationError unless temperature > 0 and max_new_tokens >= 1.
void validate(const GenerationParams& gp);

// Autoregressive sampling until EOS (included in the result) or
// max_new_tokens. Deterministic given gp.seed.
std::vector<TokenId> sample(const PolicyParams& p, std::span<const TokenId> prompt,
                            const GenerationParams& gp, const CopyConstraint* copy = nullptr);

// Maps an extractive completion back onto the source's surface words, so
// out-of-vocabulary words survive generation. EOS is dropped.
std::string realize_extraction(std::span<const std::string> source_words,
                               std::span<const TokenId> source_ids,
                               std::span<const TokenId> completion);

// Immutable deep copy used as the reference policy. Copies of a frozen policy
// share the same immutable parameters.
class FrozenPolicy {
 public:
  explicit FrozenPolicy(PolicyParams params)
      : params_(std::make_shared<const PolicyParams>(std::move(params))) {}
  const PolicyParams& params() const { return *params_; }

 private:
  std::shared_ptr<const PolicyParams> params_;
};

FrozenPolicy clone_frozen(const PolicyParams& p);
FrozenPolicy clone_frozen(const FrozenPolicy& p);

}  // namespace claimdpo
