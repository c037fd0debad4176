// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "claimdpo/jsonl.hpp"
#include "claimdpo/labels.hpp"

namespace claimdpo {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  bool operator==(const ClassScores&) const = default;
};

struct ClassificationReport {
  std::array<ClassScores, kNumLabels> per_class{};  // indexed by Label
  double weighted_f1 = 0.0;
  double accuracy = 0.0;

  const ClassScores& of(Label l) const { return per_class[index_of(l)]; }
};

// Throws ValidationError on length mismatch or empty input.
ClassificationReport classification_report(std::span<const Label> preds,
                                           std::span<const Label> golds);

// Sentence-level BLEU up to n = min(4, candidate length), no smoothing.
double bleu(std::string_view candidate, std::string_view reference);

// Exact-match METEOR with alpha 0.9, gamma 0.5, theta 3.
double meteor(std::string_view candidate, std::string_view reference);

// Translation edit rate x 100, greedy block shifts (block <= 10 words,
// displacement <= 10 words). Throws ValidationError for an empty reference.
double ter(std::string_view candidate, std::string_view reference);

// Word-level Levenshtein distance without shifts.
std::size_t word_edit_distance(std::span<const std::string> a, std::span<const std::string> b);

struct SimilarityReport {
  double mean_bleu = 0.0;
  double mean_meteor = 0.0;
  double mean_ter = 0.0;
};

// Mean of the three metrics over aligned candidate/reference lists.
SimilarityReport similarity_report(std::span<const std::string> candidates,
                                   std::span<const std::string> references);

struct LengthReport {
  double mean_words = 0.0;
  double std_words = 0.0;  // population
};

LengthReport length_stats(std::span<const std::string> texts);

Json to_json(const ClassificationReport& r);
ClassificationReport classification_report_from_json(const Json& j);
Json to_json(const SimilarityReport& r);
SimilarityReport similarity_report_from_json(const Json& j);
Json to_json(const LengthReport& r);
LengthReport length_report_from_json(const Json& j);

}  // namespace claimdpo
