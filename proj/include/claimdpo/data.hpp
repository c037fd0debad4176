// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "claimdpo/jsonl.hpp"
#include "claimdpo/labels.hpp"

namespace claimdpo {

struct ClaimRecord {
  std::string id;
  std::string seed_claim;
  std::string evidence;
  Label gold_label = Label::kNeutral;
  Split split = Split::kTrain;

  bool operator==(const ClaimRecord&) const = default;
};

// Throws ValidationError if seed_claim or evidence is blank, or id is empty.
void validate(const ClaimRecord& rec);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};

// Immutable collection of validated claims with unique ids. Safe to share
// across threads once constructed.
class Dataset {
 public:
  Dataset() = default;
  // Validates every record; throws ValidationError on duplicate ids.
  explicit Dataset(std::vector<ClaimRecord> records);

  std::span<const ClaimRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const ClaimRecord* find(const std::string& id) const;
  const ClaimRecord& at(const std::string& id) const;
  std::vector<const ClaimRecord*> in_split(Split s) const;
  SplitCounts split_counts() const;

 private:
  std::vector<ClaimRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class DatasetSchema { kNative, kHealthverLike };

// Maps external label strings onto verdict labels. Keys match
// case-insensitively.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int version, std::map<std::string, Label> table);

  // {"version": N, "labels": {"SUPPORTS": "Supported", ...}}
  static LabelMap from_json(const Json& j);
  static LabelMap load(const std::filesystem::path& path);
  // The table shipped in config/label_map.json, compiled in.
  static const LabelMap& builtin();

  std::optional<Label> lookup(std::string_view raw) const;
  int version() const { return version_; }

 private:
  int version_ = 0;
  std::map<std::string, Label> table_;  // lowercased keys
};

Dataset load_dataset(const std::filesystem::path& path, DatasetSchema schema,
                     const LabelMap& labels = LabelMap::builtin());
void save_dataset(const std::filesystem::path& path, const Dataset& ds);

Json to_json(const ClaimRecord& rec);

}  // namespace claimdpo
