// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/data.hpp"

#include <fstream>

#include "claimdpo/error.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {

namespace fs = std::filesystem;

std::string_view label_name(Label l) {
  switch (l) {
    case Label::kSupported: return "Supported";
    case Label::kRefuted: return "Refuted";
    case Label::kNeutral: return "Neutral";
  }
  return "?";
}

std::string_view label_wire_key(Label l) {
  switch (l) {
    case Label::kSupported: return "supported";
    case Label::kRefuted: return "refuted";
    case Label::kNeutral: return "neutral";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view s) {
  const std::string low = to_lower(trim(s));
  for (const Label l : kAllLabels) {
    if (low == label_wire_key(l)) return l;
  }
  return std::nullopt;
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) {
  const std::string low = to_lower(trim(s));
  if (low == "train") return Split::kTrain;
  if (low == "dev" || low == "validation") return Split::kDev;
  if (low == "test") return Split::kTest;
  return std::nullopt;
}

void validate(const ClaimRecord& rec) {
  if (trim(rec.id).empty()) throw ValidationError("claim record has an empty id");
  if (trim(rec.seed_claim).empty()) {
    throw ValidationError("claim " + rec.id + ": seed_claim is blank");
  }
  if (trim(rec.evidence).empty()) {
    throw ValidationError("claim " + rec.id + ": evidence is blank");
  }
}

Dataset::Dataset(std::vector<ClaimRecord> records) : records_(std::move(records)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate(records_[i]);
    if (!index_.emplace(records_[i].id, i).second) {
      throw ValidationError("duplicate claim id \"" + records_[i].id + "\"");
    }
  }
}

const ClaimRecord* Dataset::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const ClaimRecord& Dataset::at(const std::string& id) const {
  const auto* rec = find(id);
  if (rec == nullptr) throw ValidationError("unknown claim id \"" + id + "\"");
  return *rec;
}

std::vector<const ClaimRecord*> Dataset::in_split(Split s) const {
  std::vector<const ClaimRecord*> out;
  for (const auto& r : records_) {
    if (r.split == s) out.push_back(&r);
  }
  return out;
}

SplitCounts Dataset::split_counts() const {
  SplitCounts c;
  for (const auto& r : records_) {
    switch (r.split) {
      case Split::kTrain: ++c.train; break;
      case Split::kDev: ++c.dev; break;
      case Split::kTest: ++c.test; break;
    }
  }
  return c;
}

LabelMap::LabelMap(int version, std::map<std::string, Label> table) : version_(version) {
  for (auto& [k, v] : table) table_.emplace(to_lower(trim(k)), v);
}

LabelMap LabelMap::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("version") || !j.contains("labels") ||
      !j["labels"].is_object()) {
    throw ValidationError("label map must have \"version\" and a \"labels\" object");
  }
  std::map<std::string, Label> table;
  for (const auto& [raw, target] : j["labels"].items()) {
    const auto l = target.is_string() ? parse_label(target.get<std::string>()) : std::nullopt;
    if (!l) {
      throw ValidationError("label map entry \"" + raw + "\" targets unknown label " +
                            target.dump());
    }
    table.emplace(raw, *l);
  }
  return LabelMap(j["version"].get<int>(), std::move(table));
}

LabelMap LabelMap::load(const fs::path& path) { return from_json(read_json_file(path)); }

const LabelMap& LabelMap::builtin() {
  static const LabelMap kMap(1, {{"supports", Label::kSupported},
                                 {"refutes", Label::kRefuted},
                                 {"neutral", Label::kNeutral},
                                 {"not enough info", Label::kNeutral},
                                 {"not_enough_info", Label::kNeutral},
                                 {"supported", Label::kSupported},
                                 {"refuted", Label::kRefuted}});
  return kMap;
}

std::optional<Label> LabelMap::lookup(std::string_view raw) const {
  const auto it = table_.find(to_lower(trim(raw)));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string string_field(const Json& rec, const char* key, std::size_t line) {
  const auto it = rec.find(key);
  if (it == rec.end()) throw ParseError(line, std::string("missing field \"") + key + "\"");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ParseError(line, std::string("field \"") + key + "\" must be a string");
}

ClaimRecord parse_record(const Json& rec, DatasetSchema schema, const LabelMap& labels,
                         std::size_t line) {
  ClaimRecord out;
  out.id = string_field(rec, "id", line);
  std::string raw_label;
  if (schema == DatasetSchema::kNative) {
    out.seed_claim = string_field(rec, "seed_claim", line);
    out.evidence = string_field(rec, "evidence", line);
    raw_label = string_field(rec, "gold_label", line);
    const auto l = parse_label(raw_label);
    if (!l) throw ParseError(line, "unknown label \"" + raw_label + "\"");
    out.gold_label = *l;
  } else {
    out.seed_claim = string_field(rec, "claim", line);
    out.evidence = string_field(rec, "evidence", line);
    raw_label = string_field(rec, "label", line);
    const auto l = labels.lookup(raw_label);
    if (!l) throw ParseError(line, "unknown label \"" + raw_label + "\"");
    out.gold_label = *l;
  }
  const std::string raw_split = string_field(rec, "split", line);
  const auto s = parse_split(raw_split);
  if (!s) throw ParseError(line, "unknown split \"" + raw_split + "\"");
  out.split = *s;
  try {
    validate(out);
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
  return out;
}

}  // namespace

Dataset load_dataset(const fs::path& path, DatasetSchema schema, const LabelMap& labels) {
  std::ifstream probe(path);
  if (!probe) throw Error("dataset file not found: " + path.string());
  // Blank lines are skipped but still counted.
  std::vector<ClaimRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(probe, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(lineno, "record is not an object");
    records.push_back(parse_record(rec, schema, labels, lineno));
  }
  return Dataset(std::move(records));
}

Json to_json(const ClaimRecord& rec) {
  return Json{{"id", rec.id},
              {"seed_claim", rec.seed_claim},
              {"evidence", rec.evidence},
              {"gold_label", label_name(rec.gold_label)},
              {"split", split_name(rec.split)}};
}

void save_dataset(const fs::path& path, const Dataset& ds) {
  std::vector<Json> rows;
  rows.reserve(ds.size());
  for (const auto& r : ds.records()) rows.push_back(to_json(r));
  write_jsonl(path, rows);
}

}  // namespace claimdpo
