// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "claimdpo/data.hpp"
#include "claimdpo/random.hpp"

namespace claimdpo {

class GeneratorBackend;

// Persona attribute lists. The demographic list is the published one with its
// repeated "British" entry collapsed, leaving 20 unique attributes.
std::span<const std::string_view> demographic_attributes();
std::span<const std::string_view> professions();

struct Persona {
  std::size_t demographic_1_index = 0;
  std::size_t demographic_2_index = 1;
  std::size_t profession_index = 0;

  std::string_view demographic_1() const;
  std::string_view demographic_2() const;
  std::string_view profession() const;

  bool operator==(const Persona&) const = default;
};

// Two distinct demographic attributes (by rejection) and one profession,
// each uniform.
Persona build_persona(Rng& rng);

// "You are <d1>. You are <d2>. You are <profession>."
std::string persona_system_prompt(const Persona& p);
std::string persona_system_prompt(std::string_view d1, std::string_view d2,
                                  std::string_view profession);

// Inverse of persona_system_prompt; throws ValidationError if the text does
// not name a known profession.
Persona parse_persona_prompt(std::string_view system_prompt);

enum class Provenance { kBackend, kTemplate };

std::string_view provenance_name(Provenance p);

struct TweetRecord {
  std::string claim_id;
  std::string text;
  Persona persona;
  Provenance provenance = Provenance::kTemplate;

  bool operator==(const TweetRecord&) const = default;
};

// Frames used by the built-in template generator; frame 0 is
// "Just learned that <claim>! ...". Every frame embeds the claim verbatim.
std::size_t tweet_frame_count();
std::string template_tweet(std::size_t frame, std::string_view seed_claim, const Persona& p);

// Asks the backend for a tweet-style paraphrase of the seed claim in the
// persona's voice. Throws ExtractionError (carrying the raw reply) if the
// structured reply cannot be unwrapped; TransportError propagates.
TweetRecord synthesize_tweet(GeneratorBackend& backend, const ClaimRecord& claim,
                             const Persona& persona, std::uint64_t seed);

// Builds one tweet per claim with a persona and a seed derived from
// (master_seed, claim id), fanning out over `workers` threads.
std::vector<TweetRecord> synthesize_corpus(GeneratorBackend& backend, const Dataset& ds,
                                           std::uint64_t master_seed, std::size_t workers = 1);

// Tweet store: line-delimited {claim_id, text, persona, provenance}.
void save_tweets(const std::filesystem::path& path, std::span<const TweetRecord> tweets);
// Every claim_id must resolve in `ds`.
std::vector<TweetRecord> load_tweets(const std::filesystem::path& path, const Dataset& ds);

}  // namespace claimdpo
