// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "claimdpo/factcheck.hpp"
#include "claimdpo/labels.hpp"
#include "claimdpo/metrics.hpp"

namespace claimdpo {

inline constexpr int kRunFormatVersion = 1;

// Run directory layout:
//   config.json              loop configuration snapshot
//   dataset.jsonl            claims (native schema)
//   tweets.jsonl             synthetic posts
//   iter_NNN/                one per policy state, NNN = iteration index
//     paraphrases.jsonl      {claim_id, split, text}
//     verdicts.jsonl         {claim_id, label, probs}
//     metrics.json           classification + lengths + pair counts
//     similarity.json        BLEU / METEOR / TER against seed claims
//     preferences.jsonl      pairs used to train the next state (if any)
//     train_report.json      DPO losses and margins (if trained)
//     manifest.json          SHA-256 of every file above; written last
//   checkpoints/policy_NNN.ckpt   policy after training step NNN (>= 1)
//   baselines/<variant>/     texts.jsonl, verdicts.jsonl, metrics.json, similarity.json
//   report.json, report.txt
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "config.json"; }
  std::filesystem::path dataset() const { return root / "dataset.jsonl"; }
  std::filesystem::path tweets() const { return root / "tweets.jsonl"; }
  std::filesystem::path iteration_dir(int i) const;
  std::filesystem::path checkpoint(int i) const;
  std::filesystem::path baseline_dir(std::string_view variant) const {
    return root / "baselines" / std::string(variant);
  }
  std::filesystem::path report_json() const { return root / "report.json"; }
  std::filesystem::path report_txt() const { return root / "report.txt"; }

  // Iteration indices with a directory on disk, ascending.
  std::vector<int> iteration_indices() const;
};

struct ParaphraseRow {
  std::string claim_id;
  Split split = Split::kTrain;
  std::string text;
};

void save_paraphrases(const std::filesystem::path& path, std::span<const ParaphraseRow> rows);
std::vector<ParaphraseRow> load_paraphrases(const std::filesystem::path& path);

void save_verdicts(const std::filesystem::path& path, const std::map<std::string, Verdict>& v);
std::map<std::string, Verdict> load_verdicts(const std::filesystem::path& path);

// Contents of metrics.json for an iteration or a baseline.
struct MetricsRecord {
  std::string variant;  // "seed", "tweet", ..., "dpo_iteration_3"
  ClassificationReport classification;
  LengthReport lengths;
  std::size_t evaluated = 0;  // test claims
  std::optional<std::size_t> pair_count;  // iterations only
  std::optional<std::size_t> skip_count;
};

Json to_json(const MetricsRecord& m);
MetricsRecord metrics_record_from_json(const Json& j);

// manifest.json maps each listed file name to its digest.
void write_manifest(const std::filesystem::path& dir, std::span<const std::string> files);
// True when manifest.json exists and every listed digest matches.
bool verify_manifest(const std::filesystem::path& dir);

}  // namespace claimdpo
