// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "claimdpo/factcheck.hpp"

namespace claimdpo {

struct ScoredParaphrase {
  std::string text;
  Verdict verdict;
  int source_iteration = 0;  // -1 for the raw tweet
};

enum class Rationale {
  kOneCorrect,
  kBothCorrectConfidence,
  kSameWrongLowerConfidence,
  kDifferentWrongNeutral,
  kDifferentWrongRandom,
};

std::string_view rationale_name(Rationale r);
std::optional<Rationale> parse_rationale(std::string_view s);

struct Selection {
  bool chose_a = true;
  Rationale rationale = Rationale::kOneCorrect;
};

// Preference cascade over two competing paraphrases of the same claim:
//   1. exactly one predicted label equals gold -> that one;
//   2. both correct -> higher confidence in the predicted label;
//   3. both wrong with the same label -> lower confidence;
//   4. both wrong, different labels, one Neutral -> the Neutral one;
//   5. otherwise a seeded coin keyed on the sorted text pair.
// Confidence ties in 2-3 go to the paraphrase with the higher
// source_iteration, then to the lexicographically smaller text.
// Precondition: a.text != b.text.
Selection select_preferred(const ScoredParaphrase& a, const ScoredParaphrase& b, Label gold,
                           std::uint64_t seed);

struct PreferencePair {
  std::string claim_id;
  std::string prompt;    // x
  std::string chosen;    // y_w
  std::string rejected;  // y_l
  Rationale rationale = Rationale::kOneCorrect;
  Label gold = Label::kNeutral;
  Verdict chosen_verdict;
  Verdict rejected_verdict;
};

// Throws ValidationError if chosen == rejected or the rationale cannot be
// re-derived from the stored verdicts and gold label.
void validate(const PreferencePair& p);

struct PairBuildResult {
  std::vector<PreferencePair> pairs;
  std::size_t skipped_identical = 0;
};

// One pair per claim id where the current and previous texts differ.
// `prompts` supplies the extraction prompt per claim. Throws ValidationError
// listing orphan ids when the maps are not aligned.
PairBuildResult build_pairs(const std::map<std::string, ScoredParaphrase>& current,
                            const std::map<std::string, ScoredParaphrase>& previous,
                            const std::map<std::string, Label>& golds,
                            const std::map<std::string, std::string>& prompts,
                            std::uint64_t seed);

Json to_json(const PreferencePair& p);
PreferencePair preference_pair_from_json(const Json& j);
void save_preferences(const std::filesystem::path& path, std::span<const PreferencePair> pairs);
std::vector<PreferencePair> load_preferences(const std::filesystem::path& path);

}  // namespace claimdpo
