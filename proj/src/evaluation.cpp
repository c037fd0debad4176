// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/evaluation.hpp"

#include <array>
#include <charconv>
#include <vector>

#include "claimdpo/error.hpp"
#include "claimdpo/generator.hpp"
#include "claimdpo/parallel.hpp"
#include "claimdpo/prompts.hpp"
#include "claimdpo/random.hpp"

namespace claimdpo {
namespace {

constexpr std::array<InputVariant, 4> kBaselines = {{
    {InputVariant::Kind::kSeed, 0},
    {InputVariant::Kind::kTweet, 0},
    {InputVariant::Kind::kZeroshotCore, 0},
    {InputVariant::Kind::kZeroshotCheckworthy, 0},
}};

constexpr std::string_view kIterationPrefix = "dpo_iteration_";

void require_complete(const std::vector<std::string>& missing, std::string_view what) {
  if (missing.empty()) return;
  std::string msg = "missing " + std::string(what) + " for test ids:";
  for (const auto& id : missing) msg += " " + id;
  throw ValidationError(msg);
}

std::map<std::string, std::string> zeroshot_texts(const InputVariant& v,
                                                  const EvaluationInputs& in,
                                                  const std::map<std::string, std::string>& tweets) {
  if (in.generator == nullptr) {
    throw ValidationError(v.name() + " evaluation requires a generator backend");
  }
  const ExtractionVariant ev = v.kind == InputVariant::Kind::kZeroshotCore
                                   ? ExtractionVariant::kZeroshotCore
                                   : ExtractionVariant::kZeroshotCheckworthy;
  std::vector<std::pair<std::string, std::string>> items(tweets.begin(), tweets.end());
  std::vector<std::string> out(items.size());
  parallel_for(items.size(), in.workers, [&](std::size_t i) {
    const auto& [id, tweet] = items[i];
    const PromptPair p = extraction_prompt(tweet, ev);
    GenerateRequest req;
    req.system = p.system;
    req.prompt = p.task;
    req.seed = mix_seed(in.seed, v.name() + ":" + id);
    const GenerateResponse res = in.generator->generate(req);
    out[i] = postprocess_paraphrase(res.text);
    if (out[i].empty()) {
      throw ExtractionError("claim " + id + ": empty " + v.name() + " extraction", res.text);
    }
  });
  std::map<std::string, std::string> texts;
  for (std::size_t i = 0; i < items.size(); ++i) texts[items[i].first] = std::move(out[i]);
  return texts;
}

}  // namespace

std::string InputVariant::name() const {
  switch (kind) {
    case Kind::kSeed:
      return "seed";
    case Kind::kTweet:
      return "tweet";
    case Kind::kZeroshotCore:
      return "zeroshot_core";
    case Kind::kZeroshotCheckworthy:
      return "zeroshot_checkworthy";
    case Kind::kDpoIteration:
      return std::string(kIterationPrefix) + std::to_string(iteration);
  }
  return "unknown";
}

std::optional<InputVariant> InputVariant::parse(std::string_view s) {
  for (const auto& b : kBaselines) {
    if (b.name() == s) return b;
  }
  if (s.rfind(kIterationPrefix, 0) == 0) {
    const std::string_view digits = s.substr(kIterationPrefix.size());
    int i = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() && i >= 0) {
      return dpo_iteration(i);
    }
  }
  return std::nullopt;
}

std::span<const InputVariant> baseline_variants() { return kBaselines; }

std::map<std::string, std::string> variant_texts(const InputVariant& v,
                                                 const EvaluationInputs& in) {
  if (in.dataset == nullptr) throw ValidationError("evaluation requires a dataset");
  const auto test = in.dataset->in_split(Split::kTest);
  if (test.empty()) throw ValidationError("dataset has no test claims");
  std::map<std::string, std::string> texts;
  std::vector<std::string> missing;

  if (v.kind == InputVariant::Kind::kSeed) {
    for (const auto* rec : test) texts[rec->id] = rec->seed_claim;
    return texts;
  }
  if (v.kind == InputVariant::Kind::kDpoIteration) {
    if (in.paraphrases == nullptr) {
      throw ValidationError(v.name() + " evaluation requires that iteration's paraphrases");
    }
    for (const auto* rec : test) {
      const auto it = in.paraphrases->find(rec->id);
      if (it == in.paraphrases->end()) {
        missing.push_back(rec->id);
      } else {
        texts[rec->id] = it->second;
      }
    }
    require_complete(missing, "paraphrases");
    return texts;
  }

  std::map<std::string, std::string> by_id;
  for (const auto& t : in.tweets) by_id[t.claim_id] = t.text;
  for (const auto* rec : test) {
    const auto it = by_id.find(rec->id);
    if (it == by_id.end()) {
      missing.push_back(rec->id);
    } else {
      texts[rec->id] = it->second;
    }
  }
  require_complete(missing, "tweets");
  if (v.kind == InputVariant::Kind::kTweet) return texts;
  return zeroshot_texts(v, in, texts);
}

std::map<std::string, Verdict> check_texts(FactCheckBackend& fc, const Dataset& ds,
                                           const std::map<std::string, std::string>& texts,
                                           std::size_t workers) {
  std::vector<std::pair<std::string, std::string>> items(texts.begin(), texts.end());
  std::vector<Verdict> out(items.size());
  parallel_for(items.size(), workers, [&](std::size_t i) {
    out[i] = predict(fc, items[i].second, ds.at(items[i].first).evidence);
  });
  std::map<std::string, Verdict> verdicts;
  for (std::size_t i = 0; i < items.size(); ++i) verdicts[items[i].first] = out[i];
  return verdicts;
}

VariantEvaluation evaluate_texts(const InputVariant& v, const Dataset& ds,
                                 const std::map<std::string, std::string>& texts,
                                 FactCheckBackend& fc, std::size_t workers) {
  if (texts.empty()) throw ValidationError("nothing to evaluate for " + v.name());
  VariantEvaluation e;
  e.variant = v;
  e.texts = texts;
  e.verdicts = check_texts(fc, ds, texts, workers);

  std::vector<Label> preds, golds;
  std::vector<std::string> candidates, references;
  for (const auto& [id, text] : texts) {
    const ClaimRecord& rec = ds.at(id);
    preds.push_back(e.verdicts.at(id).label);
    golds.push_back(rec.gold_label);
    candidates.push_back(text);
    references.push_back(rec.seed_claim);
  }
  e.classification = classification_report(preds, golds);
  e.similarity = similarity_report(candidates, references);
  e.lengths = length_stats(candidates);
  return e;
}

VariantEvaluation evaluate_variant(const InputVariant& v, const EvaluationInputs& in,
                                   FactCheckBackend& fc) {
  const auto texts = variant_texts(v, in);
  return evaluate_texts(v, *in.dataset, texts, fc, in.workers);
}

MetricsRecord metrics_record(const VariantEvaluation& e) {
  MetricsRecord m;
  m.variant = e.variant.name();
  m.classification = e.classification;
  m.lengths = e.lengths;
  m.evaluated = e.texts.size();
  return m;
}

void save_baseline(const RunLayout& layout, const VariantEvaluation& e) {
  const auto dir = layout.baseline_dir(e.variant.name());
  std::filesystem::create_directories(dir);
  std::vector<Json> rows;
  for (const auto& [id, text] : e.texts) rows.push_back(Json{{"claim_id", id}, {"text", text}});
  write_jsonl(dir / "texts.jsonl", rows);
  save_verdicts(dir / "verdicts.jsonl", e.verdicts);
  write_json_file(dir / "metrics.json", to_json(metrics_record(e)));
  write_json_file(dir / "similarity.json", to_json(e.similarity));
}

}  // namespace claimdpo
