// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "claimdpo/data.hpp"
#include "claimdpo/factcheck.hpp"
#include "claimdpo/metrics.hpp"
#include "claimdpo/run_store.hpp"
#include "claimdpo/synthesis.hpp"

namespace claimdpo {

class GeneratorBackend;

struct InputVariant {
  enum class Kind { kSeed, kTweet, kZeroshotCore, kZeroshotCheckworthy, kDpoIteration };

  Kind kind = Kind::kSeed;
  int iteration = 0;  // kDpoIteration only

  static InputVariant dpo_iteration(int i) { return {Kind::kDpoIteration, i}; }
  // "seed", "tweet", "zeroshot_core", "zeroshot_checkworthy", "dpo_iteration_<i>"
  std::string name() const;
  static std::optional<InputVariant> parse(std::string_view s);

  bool operator==(const InputVariant&) const = default;
};

// The four non-iterative variants, in report order.
std::span<const InputVariant> baseline_variants();

struct EvaluationInputs {
  const Dataset* dataset = nullptr;
  std::span<const TweetRecord> tweets;
  GeneratorBackend* generator = nullptr;                       // zero-shot variants
  const std::map<std::string, std::string>* paraphrases = nullptr;  // kDpoIteration
  std::size_t workers = 1;
  std::uint64_t seed = 0;
};

struct VariantEvaluation {
  InputVariant variant;
  std::map<std::string, std::string> texts;  // test claim id -> evaluated text
  std::map<std::string, Verdict> verdicts;
  ClassificationReport classification;
  SimilarityReport similarity;  // against the seed claims
  LengthReport lengths;
};

// Test-split texts for a variant. Throws ValidationError listing the test
// ids that have no tweet or paraphrase, or when a required backend is absent.
std::map<std::string, std::string> variant_texts(const InputVariant& v, const EvaluationInputs& in);

// Fact-checks `texts` against each claim's evidence, fanning out over
// `workers` threads. Output is independent of the worker count.
std::map<std::string, Verdict> check_texts(FactCheckBackend& fc, const Dataset& ds,
                                           const std::map<std::string, std::string>& texts,
                                           std::size_t workers);

// Scores test-split texts: verdicts, classification, similarity to the seed
// claims and lengths.
VariantEvaluation evaluate_texts(const InputVariant& v, const Dataset& ds,
                                 const std::map<std::string, std::string>& texts,
                                 FactCheckBackend& fc, std::size_t workers);

VariantEvaluation evaluate_variant(const InputVariant& v, const EvaluationInputs& in,
                                   FactCheckBackend& fc);

MetricsRecord metrics_record(const VariantEvaluation& e);

// Writes texts.jsonl, verdicts.jsonl, metrics.json and similarity.json under
// the variant's baseline directory.
void save_baseline(const RunLayout& layout, const VariantEvaluation& e);

}  // namespace claimdpo
