// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/run_store.hpp"

#include <algorithm>

#include "claimdpo/error.hpp"
#include "claimdpo/jsonl.hpp"
#include "fmt/format.h"

namespace claimdpo {
namespace fs = std::filesystem;

fs::path RunLayout::iteration_dir(int i) const { return root / fmt::format("iter_{:03d}", i); }

fs::path RunLayout::checkpoint(int i) const {
  return root / "checkpoints" / fmt::format("policy_{:03d}.ckpt", i);
}

std::vector<int> RunLayout::iteration_indices() const {
  std::vector<int> out;
  if (!fs::is_directory(root)) return out;
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_directory() || name.size() != 8 || name.rfind("iter_", 0) != 0) continue;
    const std::string digits = name.substr(5);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    out.push_back(std::stoi(digits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void save_paraphrases(const fs::path& path, std::span<const ParaphraseRow> rows) {
  std::vector<Json> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back(Json{{"claim_id", r.claim_id}, {"split", split_name(r.split)}, {"text", r.text}});
  }
  write_jsonl(path, out);
}

std::vector<ParaphraseRow> load_paraphrases(const fs::path& path) {
  std::vector<ParaphraseRow> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      const auto split = parse_split(j.at("split").get<std::string>());
      if (!split) throw ParseError(line, "unknown split " + j.at("split").dump());
      out.push_back({j.at("claim_id").get<std::string>(), *split, j.at("text").get<std::string>()});
    } catch (const Json::exception& e) {
      throw ParseError(line, e.what());
    }
  }
  return out;
}

void save_verdicts(const fs::path& path, const std::map<std::string, Verdict>& v) {
  std::vector<Json> out;
  out.reserve(v.size());
  for (const auto& [id, verdict] : v) {
    Json row = to_json(verdict);
    row["claim_id"] = id;
    out.push_back(std::move(row));
  }
  write_jsonl(path, out);
}

std::map<std::string, Verdict> load_verdicts(const fs::path& path) {
  std::map<std::string, Verdict> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      out[j.at("claim_id").get<std::string>()] = verdict_from_json(j);
    } catch (const Json::exception& e) {
      throw ParseError(line, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }
  }
  return out;
}

Json to_json(const MetricsRecord& m) {
  Json j{{"format_version", kRunFormatVersion},
         {"variant", m.variant},
         {"classification", to_json(m.classification)},
         {"lengths", to_json(m.lengths)},
         {"evaluated", m.evaluated}};
  if (m.pair_count) j["pair_count"] = *m.pair_count;
  if (m.skip_count) j["skip_count"] = *m.skip_count;
  return j;
}

MetricsRecord metrics_record_from_json(const Json& j) {
  MetricsRecord m;
  m.variant = j.at("variant").get<std::string>();
  m.classification = classification_report_from_json(j.at("classification"));
  m.lengths = length_report_from_json(j.at("lengths"));
  m.evaluated = j.at("evaluated").get<std::size_t>();
  if (j.contains("pair_count")) m.pair_count = j.at("pair_count").get<std::size_t>();
  if (j.contains("skip_count")) m.skip_count = j.at("skip_count").get<std::size_t>();
  return m;
}

void write_manifest(const fs::path& dir, std::span<const std::string> files) {
  Json digests = Json::object();
  for (const auto& f : files) digests[f] = file_digest(dir / f);
  write_json_file(dir / "manifest.json",
                  Json{{"format_version", kRunFormatVersion}, {"files", digests}});
}

bool verify_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) return false;
  const Json m = read_json_file(path);
  for (const auto& [name, digest] : m.at("files").items()) {
    if (!fs::exists(dir / name) || file_digest(dir / name) != digest.get<std::string>()) {
      return false;
    }
  }
  return true;
}

}  // namespace claimdpo
