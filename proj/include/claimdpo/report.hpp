// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "claimdpo/jsonl.hpp"
#include "claimdpo/labels.hpp"

namespace claimdpo {

// One row per baseline variant and per iteration. Cells whose source file
// is missing stay empty and render as the absent marker.
struct ReportRow {
  std::string variant;
  std::optional<double> weighted_f1;
  std::array<std::optional<double>, kNumLabels> class_f1{};
  std::optional<double> mean_length;
  std::optional<double> std_length;
  std::optional<double> bleu;
  std::optional<double> meteor;
  std::optional<double> ter;
};

inline constexpr std::string_view kAbsentMarker = "n/a";

// Throws ValidationError when the directory holds neither baselines nor
// iterations.
std::vector<ReportRow> build_report(const std::filesystem::path& run_dir);

Json to_json(std::span<const ReportRow> rows);
std::string render_table(std::span<const ReportRow> rows);

// Builds the report and writes report.json and report.txt into the run
// directory. Returns the rendered table.
std::string write_report(const std::filesystem::path& run_dir);

}  // namespace claimdpo
