// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/report.hpp"

#include "claimdpo/error.hpp"
#include "claimdpo/evaluation.hpp"
#include "claimdpo/run_store.hpp"
#include "fmt/format.h"

namespace claimdpo {
namespace fs = std::filesystem;
namespace {

ReportRow load_row(const std::string& variant, const fs::path& dir) {
  ReportRow row;
  row.variant = variant;
  if (fs::exists(dir / "metrics.json")) {
    const MetricsRecord m = metrics_record_from_json(read_json_file(dir / "metrics.json"));
    row.weighted_f1 = m.classification.weighted_f1;
    for (const Label l : kAllLabels) row.class_f1[index_of(l)] = m.classification.of(l).f1;
    row.mean_length = m.lengths.mean_words;
    row.std_length = m.lengths.std_words;
  }
  if (fs::exists(dir / "similarity.json")) {
    const SimilarityReport s = similarity_report_from_json(read_json_file(dir / "similarity.json"));
    row.bleu = s.mean_bleu;
    row.meteor = s.mean_meteor;
    row.ter = s.mean_ter;
  }
  return row;
}

Json cell(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string text_cell(const std::optional<double>& v, int precision) {
  return v ? fmt::format("{:.{}f}", *v, precision) : std::string(kAbsentMarker);
}

}  // namespace

std::vector<ReportRow> build_report(const fs::path& run_dir) {
  const RunLayout layout{run_dir};
  std::vector<ReportRow> rows;
  for (const auto& v : baseline_variants()) {
    const fs::path dir = layout.baseline_dir(v.name());
    if (fs::is_directory(dir)) rows.push_back(load_row(v.name(), dir));
  }
  for (const int i : layout.iteration_indices()) {
    rows.push_back(load_row(InputVariant::dpo_iteration(i).name(), layout.iteration_dir(i)));
  }
  if (rows.empty()) {
    throw ValidationError("run directory " + run_dir.string() +
                          " holds no baseline or iteration results");
  }
  return rows;
}

Json to_json(std::span<const ReportRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json per = Json::object();
    for (const Label l : kAllLabels) per[std::string(label_name(l))] = cell(r.class_f1[index_of(l)]);
    out.push_back(Json{{"variant", r.variant},
                       {"weighted_f1", cell(r.weighted_f1)},
                       {"class_f1", per},
                       {"mean_length", cell(r.mean_length)},
                       {"std_length", cell(r.std_length)},
                       {"bleu", cell(r.bleu)},
                       {"meteor", cell(r.meteor)},
                       {"ter", cell(r.ter)}});
  }
  return Json{{"format_version", kRunFormatVersion}, {"rows", out}};
}

std::string render_table(std::span<const ReportRow> rows) {
  std::size_t width = std::string_view("variant").size();
  for (const auto& r : rows) width = std::max(width, r.variant.size());
  std::string out = fmt::format("{:<{}}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}  {:>7}  {:>7}  {:>8}  {:>8}\n",
                                "variant", width, "wF1", "F1-S", "F1-R", "F1-N", "len", "sd",
                                "BLEU", "METEOR", "TER");
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}  {:>7}  {:>7}  {:>8}  {:>8}\n",
                       r.variant, width, text_cell(r.weighted_f1, 4), text_cell(r.class_f1[0], 4),
                       text_cell(r.class_f1[1], 4), text_cell(r.class_f1[2], 4),
                       text_cell(r.mean_length, 2), text_cell(r.std_length, 2),
                       text_cell(r.bleu, 4), text_cell(r.meteor, 4), text_cell(r.ter, 2));
  }
  return out;
}

std::string write_report(const fs::path& run_dir) {
  const auto rows = build_report(run_dir);
  const RunLayout layout{run_dir};
  const std::string table = render_table(rows);
  write_json_file(layout.report_json(), to_json(rows));
  write_text_file(layout.report_txt(), table);
  return table;
}

}  // namespace claimdpo
