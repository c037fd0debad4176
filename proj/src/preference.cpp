// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/preference.hpp"

#include <array>

#include "claimdpo/error.hpp"
#include "claimdpo/jsonl.hpp"
#include "claimdpo/random.hpp"

namespace claimdpo {
namespace {

constexpr std::array<std::string_view, 5> kRationaleNames = {
    "OneCorrect", "BothCorrectConfidence", "SameWrongLowerConfidence", "DifferentWrongNeutral",
    "DifferentWrongRandom"};

// Tie-break for rules 2-3: newer iteration first, then smaller text.
bool a_wins_tie(const ScoredParaphrase& a, const ScoredParaphrase& b) {
  if (a.source_iteration != b.source_iteration) return a.source_iteration > b.source_iteration;
  return a.text < b.text;
}

}  // namespace

std::string_view rationale_name(Rationale r) { return kRationaleNames[static_cast<int>(r)]; }

std::optional<Rationale> parse_rationale(std::string_view s) {
  for (std::size_t i = 0; i < kRationaleNames.size(); ++i) {
    if (kRationaleNames[i] == s) return static_cast<Rationale>(i);
  }
  return std::nullopt;
}

Selection select_preferred(const ScoredParaphrase& a, const ScoredParaphrase& b, Label gold,
                           std::uint64_t seed) {
  const bool a_ok = verdict_correct(a.verdict, gold);
  const bool b_ok = verdict_correct(b.verdict, gold);
  const double ca = a.verdict.confidence();
  const double cb = b.verdict.confidence();

  if (a_ok != b_ok) return {a_ok, Rationale::kOneCorrect};
  if (a_ok) {
    const bool pick_a = ca != cb ? ca > cb : a_wins_tie(a, b);
    return {pick_a, Rationale::kBothCorrectConfidence};
  }
  if (a.verdict.label == b.verdict.label) {
    const bool pick_a = ca != cb ? ca < cb : a_wins_tie(a, b);
    return {pick_a, Rationale::kSameWrongLowerConfidence};
  }
  if (a.verdict.label == Label::kNeutral || b.verdict.label == Label::kNeutral) {
    return {a.verdict.label == Label::kNeutral, Rationale::kDifferentWrongNeutral};
  }
  const bool a_first = a.text < b.text;
  const std::string& lo = a_first ? a.text : b.text;
  const std::string& hi = a_first ? b.text : a.text;
  const bool pick_lo = (mix_seed(mix_seed(seed, lo), hi) & 1U) == 0;
  return {pick_lo == a_first, Rationale::kDifferentWrongRandom};
}

void validate(const PreferencePair& p) {
  if (p.chosen == p.rejected) {
    throw ValidationError("preference pair for " + p.claim_id + " has identical texts");
  }
  const ScoredParaphrase w{p.chosen, p.chosen_verdict, 1};
  const ScoredParaphrase l{p.rejected, p.rejected_verdict, 0};
  const Selection s = select_preferred(w, l, p.gold, 0);
  // Rule 5 and confidence ties are order-dependent by construction, so only
  // the rationale category is re-derived.
  if (s.rationale != p.rationale) {
    throw ValidationError("preference pair for " + p.claim_id + " has rationale " +
                          std::string(rationale_name(p.rationale)) +
                          " but its verdicts imply " + std::string(rationale_name(s.rationale)));
  }
  const bool tie = p.chosen_verdict.confidence() == p.rejected_verdict.confidence();
  if (!s.chose_a && s.rationale != Rationale::kDifferentWrongRandom && !tie) {
    throw ValidationError("preference pair for " + p.claim_id +
                          " prefers the completion its rationale rejects");
  }
}

PairBuildResult build_pairs(const std::map<std::string, ScoredParaphrase>& current,
                            const std::map<std::string, ScoredParaphrase>& previous,
                            const std::map<std::string, Label>& golds,
                            const std::map<std::string, std::string>& prompts,
                            std::uint64_t seed) {
  std::vector<std::string> orphans;
  for (const auto& [id, _] : current) {
    if (!previous.contains(id) || !golds.contains(id) || !prompts.contains(id)) {
      orphans.push_back(id);
    }
  }
  for (const auto& [id, _] : previous) {
    if (!current.contains(id)) orphans.push_back(id);
  }
  if (!orphans.empty()) {
    std::string msg = "misaligned claim ids:";
    for (const auto& id : orphans) msg += " " + id;
    throw ValidationError(msg);
  }

  PairBuildResult out;
  for (const auto& [id, cur] : current) {
    const ScoredParaphrase& prev = previous.at(id);
    if (cur.text == prev.text) {
      ++out.skipped_identical;
      continue;
    }
    const Label gold = golds.at(id);
    const Selection s = select_preferred(cur, prev, gold, mix_seed(seed, id));
    const ScoredParaphrase& w = s.chose_a ? cur : prev;
    const ScoredParaphrase& l = s.chose_a ? prev : cur;
    out.pairs.push_back(PreferencePair{id, prompts.at(id), w.text, l.text, s.rationale, gold,
                                       w.verdict, l.verdict});
  }
  return out;
}

Json to_json(const PreferencePair& p) {
  return Json{{"claim_id", p.claim_id},
              {"prompt", p.prompt},
              {"chosen", p.chosen},
              {"rejected", p.rejected},
              {"rationale", rationale_name(p.rationale)},
              {"gold_label", label_name(p.gold)},
              {"chosen_verdict", to_json(p.chosen_verdict)},
              {"rejected_verdict", to_json(p.rejected_verdict)}};
}

PreferencePair preference_pair_from_json(const Json& j) {
  PreferencePair p;
  p.claim_id = j.at("claim_id").get<std::string>();
  p.prompt = j.at("prompt").get<std::string>();
  p.chosen = j.at("chosen").get<std::string>();
  p.rejected = j.at("rejected").get<std::string>();
  const auto r = parse_rationale(j.at("rationale").get<std::string>());
  if (!r) throw ValidationError("unknown rationale " + j.at("rationale").dump());
  p.rationale = *r;
  const auto g = parse_label(j.at("gold_label").get<std::string>());
  if (!g) throw ValidationError("unknown gold label " + j.at("gold_label").dump());
  p.gold = *g;
  p.chosen_verdict = verdict_from_json(j.at("chosen_verdict"));
  p.rejected_verdict = verdict_from_json(j.at("rejected_verdict"));
  return p;
}

void save_preferences(const std::filesystem::path& path, std::span<const PreferencePair> pairs) {
  std::vector<Json> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) rows.push_back(to_json(p));
  write_jsonl(path, rows);
}

std::vector<PreferencePair> load_preferences(const std::filesystem::path& path) {
  std::vector<PreferencePair> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(preference_pair_from_json(j));
      validate(out.back());
    } catch (const Json::exception& e) {
      throw ParseError(line, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }
  }
  return out;
}

}  // namespace claimdpo
