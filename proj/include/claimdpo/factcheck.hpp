// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "claimdpo/http.hpp"
#include "claimdpo/labels.hpp"

namespace claimdpo {

struct Verdict {
  Label label = Label::kNeutral;
  std::array<double, kNumLabels> probs{0.0, 0.0, 1.0};  // indexed by Label

  // Label = argmax(probs), ties broken Supported < Refuted < Neutral.
  static Verdict from_probs(const std::array<double, kNumLabels>& probs);
  double prob(Label l) const { return probs[index_of(l)]; }
  // Probability of the predicted label.
  double confidence() const { return prob(label); }

  bool operator==(const Verdict&) const = default;
};

// Throws ValidationError unless probs lie in [0,1], sum to 1 within 1e-6 and
// label is their argmax.
void validate(const Verdict& v);

Json to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);

// NLI classes map one-to-one onto verdict labels.
enum class NliClass { kEntailment, kContradiction, kNeutral };
Label to_label(NliClass c);
NliClass to_nli(Label l);

// Premise = evidence, hypothesis = claim. Backends must tolerate concurrent
// calls.
class FactCheckBackend {
 public:
  virtual ~FactCheckBackend() = default;
  virtual Verdict check(const std::string& claim, const std::string& evidence) = 0;
  virtual std::string name() const = 0;
};

// Validates inputs, calls the backend and checks the verdict invariants.
Verdict predict(FactCheckBackend& backend, const std::string& claim,
                const std::string& evidence);

bool verdict_correct(const Verdict& v, Label gold);

struct OracleScores {
  double overlap = 0.0;        // |claim content ∩ evidence content| / |claim content|
  bool negation_mismatch = false;
  std::array<double, kNumLabels> raw{};  // (s_sup, s_ref, s_neu)
};

inline constexpr double kOracleNeutralScore = 0.45;  // tau
inline constexpr double kOracleSharpening = 5.0;

// Deterministic lexical entailment scorer. A test instrument that rewards
// concise claims whose content words appear in the evidence; it makes no
// claim about NLI quality.
OracleScores lexical_oracle_score(std::string_view claim, std::string_view evidence);

class LexicalOracle final : public FactCheckBackend {
 public:
  Verdict check(const std::string& claim, const std::string& evidence) override;
  std::string name() const override { return "lexical-oracle-v1"; }
};

// POST /nli {claim, evidence} -> {label, probs: {supported, refuted, neutral}}.
// A probability triple off by more than 1e-3 from unit sum is a
// ProtocolError; smaller drift is renormalized.
class RemoteFactChecker final : public FactCheckBackend {
 public:
  explicit RemoteFactChecker(RemoteEndpoint ep) : ep_(std::move(ep)) {}
  Verdict check(const std::string& claim, const std::string& evidence) override;
  std::string name() const override { return "remote:" + ep_.base_url; }

 private:
  RemoteEndpoint ep_;
};

// Parses a /nli response body into a verdict, applying the rules above.
Verdict parse_nli_response(const Json& body);

// Tokens that the lexical oracle ignores.
bool is_stopword(std::string_view lowered_token);

}  // namespace claimdpo
