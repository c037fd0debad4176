// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "claimdpo/data.hpp"
#include "claimdpo/dpo.hpp"
#include "claimdpo/factcheck.hpp"
#include "claimdpo/metrics.hpp"
#include "claimdpo/policy.hpp"
#include "claimdpo/prompts.hpp"

namespace claimdpo {

class GeneratorBackend;

struct LoopConfig {
  int iterations = 10;  // n: policy states 0..n, n training rounds
  std::filesystem::path dataset;
  DatasetSchema schema = DatasetSchema::kNative;
  std::filesystem::path tweets;  // synthesized with the generator when empty
  std::string generator = "template";   // "template" or "remote"
  std::string fact_checker = "oracle";  // "oracle" or "remote"
  DpoConfig dpo;
  GenerationParams generation;
  ExtractionVariant prompt_variant = ExtractionVariant::kDpo;
  std::uint64_t master_seed = 0;
  std::filesystem::path run_dir;
  PolicyDims dims;  // vocab is taken from the tokenizer
  std::size_t max_vocab = 512;
  bool use_adapter = false;  // train a fresh low-rank adapter per round, then merge
  std::size_t workers = 1;   // never affects results
};

// Throws ValidationError on out-of-range fields.
void validate(const LoopConfig& cfg);

Json to_json(const LoopConfig& cfg);
// Unknown keys are rejected; absent keys keep their defaults.
LoopConfig loop_config_from_json(const Json& j);

std::string_view extraction_variant_name(ExtractionVariant v);
std::optional<ExtractionVariant> parse_extraction_variant(std::string_view s);

struct IterationState {
  int index = 0;
  std::map<std::string, std::string> paraphrases;  // every claim
  std::map<std::string, Verdict> verdicts;         // every claim
  ClassificationReport report;                     // test split
  SimilarityReport similarity;                     // test split vs seed claims
  LengthReport lengths;                            // test split
  std::size_t pair_count = 0;
  std::size_t skip_count = 0;
};

// Iterates extract -> fact-check -> pair -> DPO for cfg.iterations rounds,
// persisting every state under cfg.run_dir. The directory must be empty or
// absent unless `resume` is set, in which case its config must match and
// work restarts after the last iteration whose manifest verifies.
std::vector<IterationState> run_loop(const LoopConfig& cfg, GeneratorBackend& generator,
                                     FactCheckBackend& fact_checker, bool resume = false);

}  // namespace claimdpo
