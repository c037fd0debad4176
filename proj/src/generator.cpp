// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/generator.hpp"

#include "claimdpo/error.hpp"
#include "claimdpo/prompts.hpp"
#include "claimdpo/random.hpp"
#include "claimdpo/synthesis.hpp"
#include "claimdpo/text.hpp"

namespace claimdpo {

Json to_json(const GenerateRequest& r) {
  return Json{{"system", r.system},
              {"prompt", r.prompt},
              {"temperature", r.temperature},
              {"max_new_tokens", r.max_new_tokens},
              {"seed", r.seed}};
}

GenerateRequest generate_request_from_json(const Json& j) {
  try {
    GenerateRequest r;
    r.system = j.at("system").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.temperature = j.value("temperature", 0.7);
    r.max_new_tokens = j.value("max_new_tokens", 256);
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("malformed generate request: ") + e.what());
  }
}

Json to_json(const GenerateResponse& r) {
  return Json{{"text", r.text}, {"model_id", r.model_id}};
}

GenerateResponse generate_response_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    throw ProtocolError("generate response lacks a string \"text\" field");
  }
  GenerateResponse r;
  r.text = j["text"].get<std::string>();
  r.model_id = j.value("model_id", std::string{});
  if (r.text.empty()) throw ProtocolError("generate response text is empty");
  return r;
}

namespace {

bool is_noise_word(std::string_view w) {
  return w.starts_with('#') || w.starts_with('@') || starts_with_ci(w, "http");
}

std::string strip_noise(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])) != 0) ++i;
    std::size_t j = i;
    while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j])) == 0) ++j;
    const auto word = s.substr(i, j - i);
    if (!word.empty() && !is_noise_word(word)) {
      if (!out.empty()) out.push_back(' ');
      out += word;
    }
    i = j;
  }
  return out;
}

std::string structured(std::string_view post) { return Json{{"post", post}}.dump(); }

}  // namespace

std::string template_extract(std::string_view tweet, bool core_only) {
  if (!core_only) return collapse_whitespace(strip_noise(tweet));
  std::string best;
  std::size_t best_words = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= tweet.size(); ++i) {
    const bool end = i == tweet.size() || tweet[i] == '.' || tweet[i] == '!' || tweet[i] == '?';
    if (!end) continue;
    std::string sentence = collapse_whitespace(strip_noise(tweet.substr(start, i - start)));
    const std::size_t words = whitespace_word_count(sentence);
    if (words > best_words) {
      best_words = words;
      best = std::move(sentence);
    }
    start = i + 1;
  }
  return best.empty() ? collapse_whitespace(tweet) : best;
}

GenerateResponse TemplateGenerator::generate(const GenerateRequest& req) {
  if (auto claim = text_after_marker(req.prompt, kStatementMarker)) {
    const Persona persona = parse_persona_prompt(req.system);
    Rng rng(mix_seed(req.seed, "template-frame"));
    const std::size_t frame = uniform_index(rng, tweet_frame_count());
    return {structured(template_tweet(frame, *claim, persona)), model_id()};
  }
  if (auto tweet = text_after_marker(req.prompt, kTextMarker)) {
    const bool core = req.prompt.find("core claim") != std::string::npos;
    return {structured(template_extract(*tweet, core)), model_id()};
  }
  return {structured(collapse_whitespace(req.prompt)), model_id()};
}

GenerateResponse RemoteGenerator::generate(const GenerateRequest& req) {
  return generate_response_from_json(post_json(ep_, "/generate", to_json(req)));
}

std::string RemoteGenerator::model_id() const {
  const Json h = get_json(ep_, "/health");
  return h.value("generator_model_id", std::string("remote"));
}

}  // namespace claimdpo
