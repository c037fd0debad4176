// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/synthesis.hpp"

#include <algorithm>
#include <array>

#include "claimdpo/error.hpp"
#include "claimdpo/generator.hpp"
#include "claimdpo/log.hpp"
#include "claimdpo/parallel.hpp"
#include "claimdpo/prompts.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {
namespace {

// Published list, verbatim. "British" appears twice.
constexpr std::array<std::string_view, 21> kRawDemographics = {
    "a teenager",
    "a young adult",
    "an adult",
    "a senior citizen",
    "a male social media user",
    "a female social media user",
    "a non-binary social media user",
    "American",
    "Canadian",
    "British",
    "Indian",
    "Chinese",
    "Brazilian",
    "Nigerian",
    "Mexican",
    "Japanese",
    "Australian",
    "British",
    "French",
    "German",
    "Italian",
};

constexpr std::array<std::string_view, 34> kProfessions = {
    "a retail cashier",
    "a teacher",
    "a receptionist",
    "a customer service representative",
    "a construction worker",
    "a security guard",
    "a barista",
    "a truck driver",
    "an electrician",
    "a plumber",
    "a carpenter",
    "a mechanic",
    "a HVAC technician",
    "a welder",
    "a software engineer",
    "a nurse",
    "an accountant",
    "a marketing manager",
    "a human resources manager",
    "a graphic designer",
    "a real estate agent",
    "a pharmacist",
    "a data scientist",
    "a robotics engineer",
    "a cybersecurity analyst",
    "a marine biologist",
    "a cryptographer",
    "a neurosurgeon",
    "an ethical hacker",
    "a sommelier",
    "an artisan cheesemaker",
    "an astronaut",
    "a high school student",
    "a college student",
};

const std::vector<std::string_view>& unique_demographics() {
  static const std::vector<std::string_view> kUnique = [] {
    std::vector<std::string_view> out;
    for (const auto d : kRawDemographics) {
      if (std::find(out.begin(), out.end(), d) == out.end()) {
        out.push_back(d);
      } else {
        log(LogLevel::kInfo, "demographic list: collapsed duplicate entry \"{}\"", d);
      }
    }
    return out;
  }();
  return kUnique;
}

constexpr std::array<std::string_view, 8> kFrames = {
    "Just learned that {claim}! Honestly mind blown, sharing this with everyone I know "
    "#health #wellness",
    "Did you know that {claim}? Wild stuff, my whole feed keeps talking about it #healthtips",
    "As {profession}, people keep asking me about this one: {claim}. Thoughts? #health",
    "{claim} #health",
    "Okay friends, quick PSA: {claim}. Stay safe out there and look after each other "
    "#staysafe #publichealth",
    "Reading the news this morning over coffee and apparently {claim}. Unsure what to make "
    "of it yet #news",
    "Overheard at my job today (I'm {profession}): {claim}. Sharing in case it helps someone "
    "#worklife",
    "Wow. {claim}. Retweet if you agree! #health #facts",
};

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

std::span<const std::string_view> demographic_attributes() { return unique_demographics(); }
std::span<const std::string_view> professions() { return kProfessions; }

std::string_view Persona::demographic_1() const {
  return demographic_attributes()[demographic_1_index];
}
std::string_view Persona::demographic_2() const {
  return demographic_attributes()[demographic_2_index];
}
std::string_view Persona::profession() const { return professions()[profession_index]; }

Persona build_persona(Rng& rng) {
  const std::size_t n = demographic_attributes().size();
  Persona p;
  p.demographic_1_index = uniform_index(rng, n);
  do {
    p.demographic_2_index = uniform_index(rng, n);
  } while (p.demographic_2_index == p.demographic_1_index);
  p.profession_index = uniform_index(rng, professions().size());
  return p;
}

std::string persona_system_prompt(std::string_view d1, std::string_view d2,
                                  std::string_view profession) {
  std::string out = "You are ";
  out += d1;
  out += ". You are ";
  out += d2;
  out += ". You are ";
  out += profession;
  out += ".";
  return out;
}

std::string persona_system_prompt(const Persona& p) {
  return persona_system_prompt(p.demographic_1(), p.demographic_2(), p.profession());
}

Persona parse_persona_prompt(std::string_view system_prompt) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  constexpr std::string_view kLead = "You are ";
  while ((pos = system_prompt.find(kLead, pos)) != std::string_view::npos) {
    pos += kLead.size();
    const auto dot = system_prompt.find('.', pos);
    parts.emplace_back(system_prompt.substr(pos, dot == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : dot - pos));
  }
  if (parts.size() != 3) {
    throw ValidationError("persona prompt must contain three \"You are\" sentences");
  }
  const auto find_in = [](auto list, std::string_view v) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] == v) return i;
    }
    return std::nullopt;
  };
  const auto d1 = find_in(demographic_attributes(), parts[0]);
  const auto d2 = find_in(demographic_attributes(), parts[1]);
  const auto pr = find_in(professions(), parts[2]);
  if (!d1 || !d2 || !pr) throw ValidationError("persona prompt names an unknown attribute");
  return Persona{*d1, *d2, *pr};
}

std::string_view provenance_name(Provenance p) {
  return p == Provenance::kBackend ? "backend" : "template";
}

std::size_t tweet_frame_count() { return kFrames.size(); }

std::string template_tweet(std::size_t frame, std::string_view seed_claim, const Persona& p) {
  std::string out(kFrames.at(frame));
  replace_all(out, "{profession}", p.profession());
  // The claim goes in last so that braces inside it are never expanded.
  const auto at = out.find("{claim}");
  out.replace(at, 7, seed_claim);
  return out;
}

TweetRecord synthesize_tweet(GeneratorBackend& backend, const ClaimRecord& claim,
                             const Persona& persona, std::uint64_t seed) {
  GenerateRequest req;
  req.system = persona_system_prompt(persona);
  req.prompt = tweet_prompt(claim);
  req.seed = seed;
  const GenerateResponse res = backend.generate(req);
  auto post = unwrap_structured_reply(res.text);
  if (!post || trim(*post).empty()) {
    throw ExtractionError("claim " + claim.id + ": generator reply is not {\"post\": ...}",
                          res.text);
  }
  return TweetRecord{claim.id, trim(*post), persona,
                     backend.is_template() ? Provenance::kTemplate : Provenance::kBackend};
}

std::vector<TweetRecord> synthesize_corpus(GeneratorBackend& backend, const Dataset& ds,
                                           std::uint64_t master_seed, std::size_t workers) {
  const auto records = ds.records();
  std::vector<TweetRecord> out(records.size());
  parallel_for(records.size(), workers, [&](std::size_t i) {
    const auto& rec = records[i];
    Rng rng(mix_seed(master_seed, "persona:" + rec.id));
    const Persona p = build_persona(rng);
    out[i] = synthesize_tweet(backend, rec, p, mix_seed(master_seed, "tweet:" + rec.id));
  });
  return out;
}

void save_tweets(const std::filesystem::path& path, std::span<const TweetRecord> tweets) {
  std::vector<Json> rows;
  rows.reserve(tweets.size());
  for (const auto& t : tweets) {
    rows.push_back(Json{{"claim_id", t.claim_id},
                        {"text", t.text},
                        {"persona",
                         {{"demographic_1", t.persona.demographic_1()},
                          {"demographic_2", t.persona.demographic_2()},
                          {"profession", t.persona.profession()}}},
                        {"provenance", provenance_name(t.provenance)}});
  }
  write_jsonl(path, rows);
}

std::vector<TweetRecord> load_tweets(const std::filesystem::path& path, const Dataset& ds) {
  std::vector<TweetRecord> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      TweetRecord t;
      t.claim_id = j.at("claim_id").get<std::string>();
      t.text = j.at("text").get<std::string>();
      const auto& p = j.at("persona");
      t.persona = parse_persona_prompt(persona_system_prompt(
          p.at("demographic_1").get<std::string>(), p.at("demographic_2").get<std::string>(),
          p.at("profession").get<std::string>()));
      const auto prov = j.at("provenance").get<std::string>();
      if (prov != "backend" && prov != "template") {
        throw ValidationError("unknown provenance \"" + prov + "\"");
      }
      t.provenance = prov == "backend" ? Provenance::kBackend : Provenance::kTemplate;
      if (ds.find(t.claim_id) == nullptr) {
        throw ValidationError("tweet references unknown claim id \"" + t.claim_id + "\"");
      }
      if (trim(t.text).empty()) throw ValidationError("tweet text is blank");
      out.push_back(std::move(t));
    } catch (const Json::exception& e) {
      throw ParseError(line, std::string("malformed tweet record: ") + e.what());
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }
  }
  return out;
}

}  // namespace claimdpo
