// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/factcheck.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "claimdpo/error.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {

Verdict Verdict::from_probs(const std::array<double, kNumLabels>& probs) {
  Verdict v;
  v.probs = probs;
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumLabels; ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  v.label = kAllLabels[best];
  return v;
}

void validate(const Verdict& v) {
  double sum = 0.0;
  for (const double p : v.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("verdict probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ValidationError("verdict probabilities do not sum to 1");
  if (Verdict::from_probs(v.probs).label != v.label) {
    throw ValidationError("verdict label is not the argmax of its probabilities");
  }
}

Json to_json(const Verdict& v) {
  Json probs = Json::object();
  for (const Label l : kAllLabels) probs[std::string(label_wire_key(l))] = v.prob(l);
  return Json{{"label", label_wire_key(v.label)}, {"probs", probs}};
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  const auto l = parse_label(j.at("label").get<std::string>());
  if (!l) throw ValidationError("unknown verdict label " + j.at("label").dump());
  v.label = *l;
  for (const Label x : kAllLabels) {
    v.probs[index_of(x)] = j.at("probs").at(std::string(label_wire_key(x))).get<double>();
  }
  return v;
}

Label to_label(NliClass c) {
  switch (c) {
    case NliClass::kEntailment: return Label::kSupported;
    case NliClass::kContradiction: return Label::kRefuted;
    case NliClass::kNeutral: return Label::kNeutral;
  }
  return Label::kNeutral;
}

NliClass to_nli(Label l) {
  switch (l) {
    case Label::kSupported: return NliClass::kEntailment;
    case Label::kRefuted: return NliClass::kContradiction;
    case Label::kNeutral: return NliClass::kNeutral;
  }
  return NliClass::kNeutral;
}

Verdict predict(FactCheckBackend& backend, const std::string& claim,
                const std::string& evidence) {
  if (trim(claim).empty()) throw ValidationError("predict: claim is blank");
  if (trim(evidence).empty()) throw ValidationError("predict: evidence is blank");
  Verdict v = backend.check(claim, evidence);
  validate(v);
  return v;
}

bool verdict_correct(const Verdict& v, Label gold) { return v.label == gold; }

bool is_stopword(std::string_view tok) {
  static const std::unordered_set<std::string_view> kStop = {
      "a",     "about", "after", "all",   "also",  "am",    "an",    "and",   "any",
      "are",   "as",    "at",    "be",    "been",  "being", "but",   "by",    "can",
      "could", "did",   "do",    "does",  "doing", "for",   "from",  "had",   "has",
      "have",  "having", "he",   "her",   "here",  "him",   "his",   "how",   "i",
      "if",    "in",    "into",  "is",    "it",    "its",   "just",  "may",   "me",
      "might", "more",  "most",  "my",    "of",    "on",    "or",    "other", "our",
      "out",   "over",  "she",   "should", "so",   "some",  "such",  "than",  "that",
      "the",   "their", "them",  "then",  "there", "these", "they",  "this",  "those",
      "to",    "too",   "under", "up",    "us",    "very",  "was",   "we",    "were",
      "what",  "when",  "where", "which", "while", "who",   "whom",  "why",   "will",
      "with",  "would", "you",   "your",
  };
  return kStop.contains(tok);
}

namespace {

struct ContentView {
  std::set<std::string> content;
  bool has_negation = false;
};

ContentView content_view(std::string_view text) {
  ContentView v;
  for (auto& t : normalized_tokens(text)) {
    if (is_negation_cue(t)) {
      v.has_negation = true;
      continue;
    }
    if (!is_stopword(t)) v.content.insert(std::move(t));
  }
  return v;
}

}  // namespace

OracleScores lexical_oracle_score(std::string_view claim, std::string_view evidence) {
  const ContentView c = content_view(claim);
  const ContentView e = content_view(evidence);
  OracleScores s;
  if (!c.content.empty()) {
    std::size_t shared = 0;
    for (const auto& t : c.content) shared += e.content.contains(t) ? 1 : 0;
    s.overlap = static_cast<double>(shared) / static_cast<double>(c.content.size());
  }
  s.negation_mismatch = c.has_negation != e.has_negation;
  const double m = s.negation_mismatch ? 1.0 : 0.0;
  s.raw = {s.overlap * (1.0 - m), s.overlap * m, kOracleNeutralScore};
  return s;
}

Verdict LexicalOracle::check(const std::string& claim, const std::string& evidence) {
  const OracleScores s = lexical_oracle_score(claim, evidence);
  std::array<double, kNumLabels> z{};
  double mx = -1e300;
  for (std::size_t i = 0; i < kNumLabels; ++i) mx = std::max(mx, kOracleSharpening * s.raw[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    z[i] = std::exp(kOracleSharpening * s.raw[i] - mx);
    sum += z[i];
  }
  for (double& p : z) p /= sum;
  return Verdict::from_probs(z);
}

Verdict parse_nli_response(const Json& body) {
  try {
    std::array<double, kNumLabels> probs{};
    double sum = 0.0;
    for (const Label l : kAllLabels) {
      const double p = body.at("probs").at(std::string(label_wire_key(l))).get<double>();
      if (!(p >= 0.0 && p <= 1.0)) throw ProtocolError("probability outside [0,1]");
      probs[index_of(l)] = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-3) {
      throw ProtocolError("probabilities sum to " + std::to_string(sum));
    }
    for (double& p : probs) p /= sum;
    Verdict v = Verdict::from_probs(probs);
    const auto claimed = parse_label(body.at("label").get<std::string>());
    if (!claimed) throw ProtocolError("unknown label " + body.at("label").dump());
    if (*claimed != v.label && v.prob(*claimed) != v.confidence()) {
      throw ProtocolError("label disagrees with argmax of probs");
    }
    return v;
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("malformed /nli response: ") + e.what());
  }
}

Verdict RemoteFactChecker::check(const std::string& claim, const std::string& evidence) {
  return parse_nli_response(post_json(ep_, "/nli", Json{{"claim", claim}, {"evidence", evidence}}));
}

}  // namespace claimdpo
