// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "claimdpo/error.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {
namespace {

using Words = std::vector<std::string>;

constexpr double kMeteorAlpha = 0.9;
constexpr double kMeteorGamma = 0.5;
constexpr double kMeteorTheta = 3.0;
constexpr std::size_t kTerMaxBlock = 10;
constexpr std::size_t kTerMaxDistance = 10;

double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

std::map<std::vector<std::string>, std::size_t> ngram_counts(const Words& w, std::size_t n) {
  std::map<Words, std::size_t> out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) {
    ++out[Words(w.begin() + static_cast<std::ptrdiff_t>(i),
                w.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

bool occurs_in(std::span<const std::string> block, const Words& ref) {
  if (block.size() > ref.size()) return false;
  return std::search(ref.begin(), ref.end(), block.begin(), block.end()) != ref.end();
}

// Moves words [start, start+len) so they begin at index `dest` of the
// sequence that remains after removing them.
Words apply_shift(const Words& w, std::size_t start, std::size_t len, std::size_t dest) {
  Words rest;
  rest.reserve(w.size());
  rest.insert(rest.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(start));
  rest.insert(rest.end(), w.begin() + static_cast<std::ptrdiff_t>(start + len), w.end());
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(dest),
              w.begin() + static_cast<std::ptrdiff_t>(start),
              w.begin() + static_cast<std::ptrdiff_t>(start + len));
  return rest;
}

}  // namespace

ClassificationReport classification_report(std::span<const Label> preds,
                                           std::span<const Label> golds) {
  if (preds.size() != golds.size()) {
    throw ValidationError("classification_report: " + std::to_string(preds.size()) +
                          " predictions vs " + std::to_string(golds.size()) + " gold labels");
  }
  if (preds.empty()) throw ValidationError("classification_report: empty input");

  std::array<std::size_t, kNumLabels> tp{}, predicted{}, support{};
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ++predicted[index_of(preds[i])];
    ++support[index_of(golds[i])];
    if (preds[i] == golds[i]) {
      ++tp[index_of(golds[i])];
      ++correct;
    }
  }
  ClassificationReport r;
  double weighted = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    ClassScores& s = r.per_class[c];
    s.support = support[c];
    s.precision = safe_div(static_cast<double>(tp[c]), static_cast<double>(predicted[c]));
    s.recall = safe_div(static_cast<double>(tp[c]), static_cast<double>(support[c]));
    s.f1 = safe_div(2.0 * s.precision * s.recall, s.precision + s.recall);
    weighted += static_cast<double>(s.support) * s.f1;
  }
  const auto n = static_cast<double>(preds.size());
  r.weighted_f1 = weighted / n;
  r.accuracy = static_cast<double>(correct) / n;
  return r;
}

double bleu(std::string_view candidate, std::string_view reference) {
  const Words cand = normalized_tokens(candidate);
  const Words ref = normalized_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  const std::size_t max_n = std::min<std::size_t>(4, cand.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto c = ngram_counts(cand, n);
    const auto r = ngram_counts(ref, n);
    std::size_t clipped = 0;
    for (const auto& [gram, count] : c) {
      const auto it = r.find(gram);
      if (it != r.end()) clipped += std::min(count, it->second);
    }
    if (clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(cand.size() - n + 1));
  }
  const auto cl = static_cast<double>(cand.size());
  const auto rl = static_cast<double>(ref.size());
  const double bp = cl < rl ? std::exp(1.0 - rl / cl) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

double meteor(std::string_view candidate, std::string_view reference) {
  const Words cand = normalized_tokens(candidate);
  const Words ref = normalized_tokens(reference);
  if (cand.empty() || ref.empty()) return 0.0;

  std::vector<bool> used(ref.size(), false);
  std::vector<std::ptrdiff_t> align(cand.size(), -1);
  std::size_t m = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (!used[j] && ref[j] == cand[i]) {
        used[j] = true;
        align[i] = static_cast<std::ptrdiff_t>(j);
        ++m;
        break;
      }
    }
  }
  if (m == 0) return 0.0;

  std::size_t chunks = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (align[i] < 0) continue;
    const bool continues = i > 0 && align[i - 1] >= 0 && align[i] == align[i - 1] + 1;
    if (!continues) ++chunks;
  }
  const double p = static_cast<double>(m) / static_cast<double>(cand.size());
  const double r = static_cast<double>(m) / static_cast<double>(ref.size());
  const double fmean = p * r / (kMeteorAlpha * p + (1.0 - kMeteorAlpha) * r);
  const double frag = static_cast<double>(chunks) / static_cast<double>(m);
  const double penalty = kMeteorGamma * std::pow(frag, kMeteorTheta);
  return fmean * (1.0 - penalty);
}

std::size_t word_edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double ter(std::string_view candidate, std::string_view reference) {
  Words cand = normalized_tokens(candidate);
  const Words ref = normalized_tokens(reference);
  if (ref.empty()) throw ValidationError("ter: empty reference");

  std::size_t shifts = 0;
  std::size_t dist = word_edit_distance(cand, ref);
  while (dist > 0) {
    std::size_t best = dist;
    Words best_words;
    for (std::size_t start = 0; start < cand.size(); ++start) {
      for (std::size_t len = 1; len <= kTerMaxBlock && start + len <= cand.size(); ++len) {
        const std::span<const std::string> block(cand.data() + start, len);
        if (!occurs_in(block, ref)) break;  // longer blocks cannot occur either
        const std::size_t remaining = cand.size() - len;
        const std::size_t lo = start > kTerMaxDistance ? start - kTerMaxDistance : 0;
        const std::size_t hi = std::min(remaining, start + kTerMaxDistance);
        for (std::size_t dest = lo; dest <= hi; ++dest) {
          if (dest == start) continue;
          Words shifted = apply_shift(cand, start, len, dest);
          const std::size_t d = word_edit_distance(shifted, ref);
          if (d < best) {
            best = d;
            best_words = std::move(shifted);
          }
        }
      }
    }
    if (best >= dist) break;
    cand = std::move(best_words);
    dist = best;
    ++shifts;
  }
  return 100.0 * static_cast<double>(dist + shifts) / static_cast<double>(ref.size());
}

SimilarityReport similarity_report(std::span<const std::string> candidates,
                                   std::span<const std::string> references) {
  if (candidates.size() != references.size()) {
    throw ValidationError("similarity_report: candidate and reference counts differ");
  }
  if (candidates.empty()) throw ValidationError("similarity_report: empty input");
  SimilarityReport r;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    r.mean_bleu += bleu(candidates[i], references[i]);
    r.mean_meteor += meteor(candidates[i], references[i]);
    r.mean_ter += ter(candidates[i], references[i]);
  }
  const auto n = static_cast<double>(candidates.size());
  r.mean_bleu /= n;
  r.mean_meteor /= n;
  r.mean_ter /= n;
  return r;
}

LengthReport length_stats(std::span<const std::string> texts) {
  if (texts.empty()) throw ValidationError("length_stats: empty input");
  const auto n = static_cast<double>(texts.size());
  double sum = 0.0;
  for (const auto& t : texts) sum += static_cast<double>(whitespace_word_count(t));
  const double mean = sum / n;
  double sq = 0.0;
  for (const auto& t : texts) {
    const double d = static_cast<double>(whitespace_word_count(t)) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / n)};
}

Json to_json(const ClassificationReport& r) {
  Json per = Json::object();
  for (const Label l : kAllLabels) {
    const ClassScores& s = r.of(l);
    per[std::string(label_name(l))] = Json{
        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  return Json{{"per_class", per}, {"weighted_f1", r.weighted_f1}, {"accuracy", r.accuracy}};
}

ClassificationReport classification_report_from_json(const Json& j) {
  ClassificationReport r;
  const Json& per = j.at("per_class");
  for (const Label l : kAllLabels) {
    const Json& s = per.at(std::string(label_name(l)));
    r.per_class[index_of(l)] = {s.at("precision").get<double>(), s.at("recall").get<double>(),
                                s.at("f1").get<double>(), s.at("support").get<std::size_t>()};
  }
  r.weighted_f1 = j.at("weighted_f1").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  return r;
}

Json to_json(const SimilarityReport& r) {
  return Json{{"mean_bleu", r.mean_bleu}, {"mean_meteor", r.mean_meteor}, {"mean_ter", r.mean_ter}};
}

SimilarityReport similarity_report_from_json(const Json& j) {
  return {j.at("mean_bleu").get<double>(), j.at("mean_meteor").get<double>(),
          j.at("mean_ter").get<double>()};
}

Json to_json(const LengthReport& r) {
  return Json{{"mean_words", r.mean_words}, {"std_words", r.std_words}};
}

LengthReport length_report_from_json(const Json& j) {
  return {j.at("mean_words").get<double>(), j.at("std_words").get<double>()};
}

}  // namespace claimdpo
