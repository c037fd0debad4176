// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/loop.hpp"

#include <algorithm>
#include <array>

#include "claimdpo/checkpoint.hpp"
#include "claimdpo/error.hpp"
#include "claimdpo/evaluation.hpp"
#include "claimdpo/generator.hpp"
#include "claimdpo/log.hpp"
#include "claimdpo/parallel.hpp"
#include "claimdpo/preference.hpp"
#include "claimdpo/run_store.hpp"
#include "claimdpo/synthesis.hpp"
#include "claimdpo/text.hpp"
#include "claimdpo/tokenizer.hpp"

namespace claimdpo {
namespace fs = std::filesystem;
namespace {

constexpr std::array<std::string_view, 3> kVariantNames = {"dpo", "zeroshot_core",
                                                           "zeroshot_checkworthy"};

// Everything a round needs about one claim, in dataset order.
struct ClaimContext {
  const ClaimRecord* record = nullptr;
  std::string tweet;
  std::string prompt;  // joined extraction prompt
  std::vector<std::string> source_words;
  std::vector<TokenId> source_ids;
  std::vector<TokenId> prompt_ids;
};

struct RunData {
  Dataset dataset;
  std::vector<TweetRecord> tweets;
  Tokenizer tokenizer;
  std::vector<ClaimContext> claims;
};

bool is_empty_dir(const fs::path& p) {
  return !fs::exists(p) || (fs::is_directory(p) && fs::is_empty(p));
}

// Config fields that define the results; worker count and run_dir are
// excluded so a resumed run may use a different pool size or path.
Json result_defining(const LoopConfig& cfg) {
  Json j = to_json(cfg);
  j.erase("workers");
  j.erase("run_dir");
  return j;
}

RunData prepare_run(const LoopConfig& cfg, const RunLayout& layout, GeneratorBackend& gen,
                    bool resuming) {
  RunData d;
  if (resuming) {
    d.dataset = load_dataset(layout.dataset(), DatasetSchema::kNative);
    d.tweets = load_tweets(layout.tweets(), d.dataset);
  } else {
    d.dataset = load_dataset(cfg.dataset, cfg.schema);
    if (cfg.tweets.empty()) {
      log(LogLevel::kInfo, "synthesizing {} posts with {}", d.dataset.size(), gen.model_id());
      d.tweets = synthesize_corpus(gen, d.dataset, mix_seed(cfg.master_seed, "tweets"),
                                   cfg.workers);
    } else {
      d.tweets = load_tweets(cfg.tweets, d.dataset);
    }
    save_dataset(layout.dataset(), d.dataset);
    save_tweets(layout.tweets(), d.tweets);
  }
  std::map<std::string, const TweetRecord*> by_id;
  for (const auto& t : d.tweets) by_id[t.claim_id] = &t;

  std::vector<std::string> missing;
  std::vector<std::string> vocab_corpus;
  for (const auto& rec : d.dataset.records()) {
    const auto it = by_id.find(rec.id);
    if (it == by_id.end()) {
      missing.push_back(rec.id);
      continue;
    }
    ClaimContext c;
    c.record = &rec;
    c.tweet = it->second->text;
    c.prompt = extraction_prompt(c.tweet, cfg.prompt_variant).joined();
    c.source_words = word_tokens(c.tweet);
    if (rec.split == Split::kTrain) vocab_corpus.push_back(c.prompt);
    d.claims.push_back(std::move(c));
  }
  if (!missing.empty()) {
    std::string msg = "no post for claim ids:";
    for (const auto& id : missing) msg += " " + id;
    throw ValidationError(msg);
  }
  if (vocab_corpus.empty()) throw ValidationError("dataset has no train claims");
  d.tokenizer = Tokenizer::build(vocab_corpus, cfg.max_vocab);
  for (auto& c : d.claims) {
    c.source_ids = d.tokenizer.encode(c.tweet);
    c.prompt_ids = d.tokenizer.encode(c.prompt);
    if (c.source_ids.size() != c.source_words.size()) {
      throw Error("tokenizer and word splitter disagree on claim " + c.record->id);
    }
  }
  return d;
}

std::map<std::string, std::string> extract_all(const RunData& d, const PolicyParams& policy,
                                               const LoopConfig& cfg, int iteration) {
  std::vector<std::string> out(d.claims.size());
  const std::uint64_t round_seed =
      mix_seed(mix_seed(cfg.master_seed, "extract"), static_cast<std::uint64_t>(iteration));
  parallel_for(d.claims.size(), cfg.workers, [&](std::size_t i) {
    const ClaimContext& c = d.claims[i];
    GenerationParams gp = cfg.generation;
    gp.seed = mix_seed(round_seed, c.record->id);
    const CopyConstraint copy{c.source_ids, cfg.dpo.prior};
    const auto ids = sample(policy, c.prompt_ids, gp, &copy);
    out[i] = realize_extraction(c.source_words, c.source_ids, ids);
  });
  std::map<std::string, std::string> texts;
  for (std::size_t i = 0; i < d.claims.size(); ++i) texts[d.claims[i].record->id] = out[i];
  return texts;
}

void score_test_split(const Dataset& ds, IterationState& s) {
  std::vector<Label> preds, golds;
  std::vector<std::string> cands, refs;
  for (const auto* rec : ds.in_split(Split::kTest)) {
    preds.push_back(s.verdicts.at(rec->id).label);
    golds.push_back(rec->gold_label);
    cands.push_back(s.paraphrases.at(rec->id));
    refs.push_back(rec->seed_claim);
  }
  if (preds.empty()) throw ValidationError("dataset has no test claims");
  s.report = classification_report(preds, golds);
  s.similarity = similarity_report(cands, refs);
  s.lengths = length_stats(cands);
}

std::map<std::string, ScoredParaphrase> train_entries(const RunData& d,
                                                      const std::map<std::string, std::string>& texts,
                                                      const std::map<std::string, Verdict>& verdicts,
                                                      int source_iteration) {
  std::map<std::string, ScoredParaphrase> out;
  for (const auto& c : d.claims) {
    if (c.record->split != Split::kTrain) continue;
    const auto& id = c.record->id;
    out[id] = ScoredParaphrase{texts.at(id), verdicts.at(id), source_iteration};
  }
  return out;
}

EncodedPair encode_pair(const RunData& d, const std::map<std::string, std::size_t>& index,
                        const PreferencePair& p) {
  const ClaimContext& c = d.claims[index.at(p.claim_id)];
  EncodedPair e;
  e.id = p.claim_id;
  e.prompt = c.prompt_ids;
  e.source = c.source_ids;
  e.chosen = d.tokenizer.encode(p.chosen);
  e.chosen.push_back(kEos);
  e.rejected = d.tokenizer.encode(p.rejected);
  e.rejected.push_back(kEos);
  return e;
}

IterationState load_state(const RunLayout& layout, int i) {
  IterationState s;
  s.index = i;
  const fs::path dir = layout.iteration_dir(i);
  for (const auto& row : load_paraphrases(dir / "paraphrases.jsonl")) {
    s.paraphrases[row.claim_id] = row.text;
  }
  s.verdicts = load_verdicts(dir / "verdicts.jsonl");
  const MetricsRecord m = metrics_record_from_json(read_json_file(dir / "metrics.json"));
  s.report = m.classification;
  s.lengths = m.lengths;
  s.pair_count = m.pair_count.value_or(0);
  s.skip_count = m.skip_count.value_or(0);
  s.similarity = similarity_report_from_json(read_json_file(dir / "similarity.json"));
  return s;
}

}  // namespace

std::string_view extraction_variant_name(ExtractionVariant v) {
  return kVariantNames[static_cast<std::size_t>(v)];
}

std::optional<ExtractionVariant> parse_extraction_variant(std::string_view s) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
    if (kVariantNames[i] == s) return static_cast<ExtractionVariant>(i);
  }
  return std::nullopt;
}

void validate(const LoopConfig& cfg) {
  if (cfg.iterations < 1) throw ValidationError("iterations must be at least 1");
  if (cfg.run_dir.empty()) throw ValidationError("run_dir is required");
  if (cfg.generator != "template" && cfg.generator != "remote") {
    throw ValidationError("generator must be \"template\" or \"remote\"");
  }
  if (cfg.fact_checker != "oracle" && cfg.fact_checker != "remote") {
    throw ValidationError("fact_checker must be \"oracle\" or \"remote\"");
  }
  if (cfg.max_vocab < kNumReserved + 1) throw ValidationError("max_vocab is too small");
  if (cfg.dims.context < 1 || cfg.dims.embed < 1 || cfg.dims.hidden < 1 || cfg.dims.rank < 1) {
    throw ValidationError("policy dimensions must be positive");
  }
  validate(cfg.dpo);
  validate(cfg.generation);
}

Json to_json(const LoopConfig& cfg) {
  return Json{
      {"format_version", kRunFormatVersion},
      {"iterations", cfg.iterations},
      {"dataset", cfg.dataset.string()},
      {"schema", cfg.schema == DatasetSchema::kNative ? "native" : "healthver_like"},
      {"tweets", cfg.tweets.string()},
      {"generator", cfg.generator},
      {"fact_checker", cfg.fact_checker},
      {"dpo", to_json(cfg.dpo)},
      {"generation",
       {{"max_new_tokens", cfg.generation.max_new_tokens},
        {"temperature", cfg.generation.temperature},
        {"top_k", cfg.generation.top_k},
        {"greedy", cfg.generation.greedy}}},
      {"prompt_variant", extraction_variant_name(cfg.prompt_variant)},
      {"master_seed", cfg.master_seed},
      {"run_dir", cfg.run_dir.string()},
      {"policy",
       {{"context", cfg.dims.context},
        {"embed", cfg.dims.embed},
        {"hidden", cfg.dims.hidden},
        {"rank", cfg.dims.rank}}},
      {"max_vocab", cfg.max_vocab},
      {"use_adapter", cfg.use_adapter},
      {"workers", cfg.workers},
  };
}

LoopConfig loop_config_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("loop config must be a JSON object");
  const Json defaults = to_json(LoopConfig{});
  for (const auto& [key, _] : j.items()) {
    if (!defaults.contains(key)) throw ValidationError("unknown config key \"" + key + "\"");
  }
  LoopConfig c;
  try {
    c.iterations = j.value("iterations", c.iterations);
    c.dataset = j.value("dataset", std::string());
    const std::string schema = j.value("schema", std::string("native"));
    if (schema != "native" && schema != "healthver_like") {
      throw ValidationError("unknown schema \"" + schema + "\"");
    }
    c.schema = schema == "native" ? DatasetSchema::kNative : DatasetSchema::kHealthverLike;
    c.tweets = j.value("tweets", std::string());
    c.generator = j.value("generator", c.generator);
    c.fact_checker = j.value("fact_checker", c.fact_checker);
    if (j.contains("dpo")) c.dpo = dpo_config_from_json(j.at("dpo"));
    if (j.contains("generation")) {
      const Json& g = j.at("generation");
      c.generation.max_new_tokens = g.value("max_new_tokens", c.generation.max_new_tokens);
      c.generation.temperature = g.value("temperature", c.generation.temperature);
      c.generation.top_k = g.value("top_k", c.generation.top_k);
      c.generation.greedy = g.value("greedy", c.generation.greedy);
    }
    const std::string variant = j.value("prompt_variant", std::string("dpo"));
    const auto v = parse_extraction_variant(variant);
    if (!v) throw ValidationError("unknown prompt_variant \"" + variant + "\"");
    c.prompt_variant = *v;
    c.master_seed = j.value("master_seed", c.master_seed);
    c.run_dir = j.value("run_dir", std::string());
    if (j.contains("policy")) {
      const Json& p = j.at("policy");
      c.dims.context = p.value("context", c.dims.context);
      c.dims.embed = p.value("embed", c.dims.embed);
      c.dims.hidden = p.value("hidden", c.dims.hidden);
      c.dims.rank = p.value("rank", c.dims.rank);
    }
    c.max_vocab = j.value("max_vocab", c.max_vocab);
    c.use_adapter = j.value("use_adapter", c.use_adapter);
    c.workers = j.value("workers", c.workers);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("loop config: ") + e.what());
  }
  return c;
}

std::vector<IterationState> run_loop(const LoopConfig& cfg, GeneratorBackend& generator,
                                     FactCheckBackend& fact_checker, bool resume) {
  validate(cfg);
  const RunLayout layout{cfg.run_dir};
  const bool resuming = !is_empty_dir(cfg.run_dir);
  if (resuming) {
    if (!resume) {
      throw ValidationError("run directory " + cfg.run_dir.string() +
                            " is not empty; pass resume to continue it");
    }
    if (!fs::exists(layout.config()) ||
        result_defining(loop_config_from_json(read_json_file(layout.config()))) !=
            result_defining(cfg)) {
      throw ValidationError("run directory " + cfg.run_dir.string() +
                            " was created with a different configuration");
    }
  } else {
    fs::create_directories(cfg.run_dir);
  }
  const RunData d = prepare_run(cfg, layout, generator, resuming);
  if (!resuming) write_json_file(layout.config(), to_json(cfg));

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < d.claims.size(); ++i) index[d.claims[i].record->id] = i;
  std::map<std::string, Label> golds;
  std::map<std::string, std::string> prompts;
  for (const auto& c : d.claims) {
    if (c.record->split != Split::kTrain) continue;
    golds[c.record->id] = c.record->gold_label;
    prompts[c.record->id] = c.prompt;
  }

  PolicyDims dims = cfg.dims;
  dims.vocab = d.tokenizer.size();
  Rng init_rng(mix_seed(cfg.master_seed, "policy-init"));
  PolicyParams policy = init_policy(dims, init_rng);

  // Resume after the longest prefix of verified iterations.
  std::vector<IterationState> states;
  int start = 0;
  for (const int i : layout.iteration_indices()) {
    if (i != start || i > cfg.iterations || !verify_manifest(layout.iteration_dir(i))) break;
    states.push_back(load_state(layout, i));
    ++start;
  }
  for (const int i : layout.iteration_indices()) {
    if (i >= start) fs::remove_all(layout.iteration_dir(i));
  }
  if (start > 0) {
    log(LogLevel::kInfo, "resuming after iteration {}", start - 1);
    if (start <= cfg.iterations) {
      Checkpoint ck = load_checkpoint(layout.checkpoint(start));
      if (!(ck.tokenizer == d.tokenizer)) {
        throw Error("checkpoint vocabulary does not match the run's tokenizer");
      }
      policy = std::move(ck.params);
    }
  }

  std::map<std::string, ScoredParaphrase> previous;
  if (start == 0) {
    std::map<std::string, std::string> tweet_texts;
    for (const auto& c : d.claims) {
      if (c.record->split == Split::kTrain) tweet_texts[c.record->id] = c.tweet;
    }
    const auto tweet_verdicts = check_texts(fact_checker, d.dataset, tweet_texts, cfg.workers);
    previous = train_entries(d, tweet_texts, tweet_verdicts, -1);
  } else if (start <= cfg.iterations) {
    const IterationState& last = states.back();
    previous = train_entries(d, last.paraphrases, last.verdicts, last.index);
  }

  for (int i = start; i <= cfg.iterations; ++i) {
    const fs::path dir = layout.iteration_dir(i);
    fs::create_directories(dir);
    IterationState s;
    s.index = i;
    s.paraphrases = extract_all(d, policy, cfg, i);
    s.verdicts = check_texts(fact_checker, d.dataset, s.paraphrases, cfg.workers);
    score_test_split(d.dataset, s);

    std::vector<std::string> files = {"paraphrases.jsonl", "verdicts.jsonl", "metrics.json",
                                      "similarity.json"};
    auto current = train_entries(d, s.paraphrases, s.verdicts, i);
    if (i < cfg.iterations) {
      const PairBuildResult built =
          build_pairs(current, previous, golds, prompts,
                      mix_seed(mix_seed(cfg.master_seed, "pairs"), static_cast<std::uint64_t>(i)));
      s.pair_count = built.pairs.size();
      s.skip_count = built.skipped_identical;
      save_preferences(dir / "preferences.jsonl", built.pairs);
      files.push_back("preferences.jsonl");

      PolicyParams next = policy;
      if (!built.pairs.empty()) {
        std::vector<EncodedPair> encoded;
        encoded.reserve(built.pairs.size());
        for (const auto& p : built.pairs) encoded.push_back(encode_pair(d, index, p));
        DpoConfig dc = cfg.dpo;
        dc.shuffle_seed = mix_seed(mix_seed(cfg.master_seed, cfg.dpo.shuffle_seed),
                                   static_cast<std::uint64_t>(i));
        const FrozenPolicy reference = clone_frozen(policy);
        PolicyParams start_params = policy;
        if (cfg.use_adapter) {
          Rng rng(mix_seed(mix_seed(cfg.master_seed, "adapter"), static_cast<std::uint64_t>(i)));
          enable_adapter(start_params, dims.rank, rng);
          dc.adapter_only = true;
        }
        TrainReport tr = train(encoded, start_params, reference, dc);
        next = std::move(tr.final_params);
        if (cfg.use_adapter) merge_adapter(next);
        write_json_file(dir / "train_report.json", to_json(tr));
        files.push_back("train_report.json");
      } else {
        log(LogLevel::kWarn, "iteration {}: no preference pairs, policy unchanged", i);
      }
      fs::create_directories(layout.checkpoint(i + 1).parent_path());
      save_checkpoint(layout.checkpoint(i + 1), Checkpoint{d.tokenizer, next});
      policy = std::move(next);
    }

    std::vector<ParaphraseRow> rows;
    for (const auto& c : d.claims) {
      rows.push_back({c.record->id, c.record->split, s.paraphrases.at(c.record->id)});
    }
    save_paraphrases(dir / "paraphrases.jsonl", rows);
    save_verdicts(dir / "verdicts.jsonl", s.verdicts);
    MetricsRecord m;
    m.variant = InputVariant::dpo_iteration(i).name();
    m.classification = s.report;
    m.lengths = s.lengths;
    m.evaluated = d.dataset.in_split(Split::kTest).size();
    if (i < cfg.iterations) {
      m.pair_count = s.pair_count;
      m.skip_count = s.skip_count;
    }
    write_json_file(dir / "metrics.json", to_json(m));
    write_json_file(dir / "similarity.json", to_json(s.similarity));
    write_manifest(dir, files);

    log(LogLevel::kInfo, "iteration {}: weighted F1 {:.4f}, mean length {:.2f}, pairs {}", i,
        s.report.weighted_f1, s.lengths.mean_words, s.pair_count);
    previous = std::move(current);
    states.push_back(std::move(s));
  }
  return states;
}

}  // namespace claimdpo
