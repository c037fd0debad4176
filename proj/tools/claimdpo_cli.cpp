// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line entry point: synth, loop, baseline, report, check-backends.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "claimdpo/corpus.hpp"
#include "claimdpo/error.hpp"
#include "claimdpo/evaluation.hpp"
#include "claimdpo/generator.hpp"
#include "claimdpo/log.hpp"
#include "claimdpo/loop.hpp"
#include "claimdpo/report.hpp"
#include "claimdpo/synthesis.hpp"

namespace {

using namespace claimdpo;

constexpr const char* kGeneratorUrlVar = "CLAIMDPO_GENERATOR_URL";
constexpr const char* kNliUrlVar = "CLAIMDPO_NLI_URL";

RemoteEndpoint endpoint_or_die(const char* var) {
  auto ep = RemoteEndpoint::from_env(var);
  if (!ep) throw ValidationError(std::string("remote backend selected but ") + var + " is unset");
  return *ep;
}

std::unique_ptr<GeneratorBackend> make_generator(const std::string& kind) {
  if (kind == "template") return std::make_unique<TemplateGenerator>();
  if (kind == "remote") return std::make_unique<RemoteGenerator>(endpoint_or_die(kGeneratorUrlVar));
  throw ValidationError("unknown generator \"" + kind + "\"");
}

std::unique_ptr<FactCheckBackend> make_fact_checker(const std::string& kind) {
  if (kind == "oracle") return std::make_unique<LexicalOracle>();
  if (kind == "remote") return std::make_unique<RemoteFactChecker>(endpoint_or_die(kNliUrlVar));
  throw ValidationError("unknown fact checker \"" + kind + "\"");
}

DatasetSchema parse_schema(const std::string& s) {
  if (s == "native") return DatasetSchema::kNative;
  if (s == "healthver_like") return DatasetSchema::kHealthverLike;
  throw ValidationError("unknown schema \"" + s + "\"");
}

// Loop flags. Each one overrides the config file only when given.
struct LoopFlags {
  std::string config_file;
  LoopConfig cfg;
  std::string dataset, tweets, run_dir, schema = "native", prompt_variant = "dpo";
  bool resume = false;
  std::vector<CLI::Option*> opts;
};

void add_loop_flags(CLI::App& cmd, LoopFlags& f) {
  LoopConfig& c = f.cfg;
  cmd.add_option("--config", f.config_file, "JSON config file; flags take precedence");
  f.opts = {
      cmd.add_option("--iterations", c.iterations, "Training rounds n"),
      cmd.add_option("--dataset", f.dataset, "Claims file"),
      cmd.add_option("--schema", f.schema, "native or healthver_like"),
      cmd.add_option("--tweets", f.tweets, "Posts file (synthesized when omitted)"),
      cmd.add_option("--generator", c.generator, "template or remote"),
      cmd.add_option("--fact-checker", c.fact_checker, "oracle or remote"),
      cmd.add_option("--run-dir", f.run_dir, "Run directory"),
      cmd.add_option("--seed", c.master_seed, "Master seed"),
      cmd.add_option("--beta", c.dpo.beta, "DPO beta"),
      cmd.add_option("--lr", c.dpo.learning_rate, "Learning rate"),
      cmd.add_option("--epochs", c.dpo.epochs, "Epochs per round"),
      cmd.add_option("--batch-size", c.dpo.batch_size, "Minibatch size"),
      cmd.add_option("--temperature", c.generation.temperature, "Sampling temperature"),
      cmd.add_option("--top-k", c.generation.top_k, "Top-k cutoff (0 = off)"),
      cmd.add_option("--max-new-tokens", c.generation.max_new_tokens, "Extraction length cap"),
      cmd.add_option("--prompt-variant", f.prompt_variant,
                     "dpo, zeroshot_core or zeroshot_checkworthy"),
      cmd.add_flag("--adapter", c.use_adapter, "Train a low-rank adapter per round"),
      cmd.add_option("--workers", c.workers, "Worker threads"),
  };
  cmd.add_flag("--resume", f.resume, "Continue an existing run directory");
}

LoopConfig resolve_loop_config(const LoopFlags& f) {
  LoopConfig out;
  if (!f.config_file.empty()) out = loop_config_from_json(read_json_file(f.config_file));
  const auto given = [&](const char* name) {
    for (const auto* o : f.opts) {
      if (o->check_lname(std::string(name).substr(2)) && o->count() > 0) return true;
    }
    return false;
  };
  const LoopConfig& c = f.cfg;
  if (given("--iterations")) out.iterations = c.iterations;
  if (given("--dataset")) out.dataset = f.dataset;
  if (given("--schema")) out.schema = parse_schema(f.schema);
  if (given("--tweets")) out.tweets = f.tweets;
  if (given("--generator")) out.generator = c.generator;
  if (given("--fact-checker")) out.fact_checker = c.fact_checker;
  if (given("--run-dir")) out.run_dir = f.run_dir;
  if (given("--seed")) out.master_seed = c.master_seed;
  if (given("--beta")) out.dpo.beta = c.dpo.beta;
  if (given("--lr")) out.dpo.learning_rate = c.dpo.learning_rate;
  if (given("--epochs")) out.dpo.epochs = c.dpo.epochs;
  if (given("--batch-size")) out.dpo.batch_size = c.dpo.batch_size;
  if (given("--temperature")) out.generation.temperature = c.generation.temperature;
  if (given("--top-k")) out.generation.top_k = c.generation.top_k;
  if (given("--max-new-tokens")) out.generation.max_new_tokens = c.generation.max_new_tokens;
  if (given("--prompt-variant")) {
    const auto v = parse_extraction_variant(f.prompt_variant);
    if (!v) throw ValidationError("unknown prompt variant \"" + f.prompt_variant + "\"");
    out.prompt_variant = *v;
  }
  if (given("--adapter")) out.use_adapter = c.use_adapter;
  if (given("--workers")) out.workers = c.workers;
  if (out.dataset.empty()) throw ValidationError("a dataset is required (--dataset or config)");
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Iterative preference optimization of claim extraction"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Build synthetic posts for a claims file");
  std::string s_dataset, s_out, s_schema = "native", s_generator = "template", s_desk_out;
  std::uint64_t s_seed = 0;
  std::size_t s_workers = 1, s_desk_size = 0;
  synth->add_option("--dataset", s_dataset, "Claims file (input, or output with --desk-corpus)");
  synth->add_option("--schema", s_schema, "native or healthver_like");
  synth->add_option("--out", s_out, "Posts file to write")->required();
  synth->add_option("--generator", s_generator, "template or remote");
  synth->add_option("--seed", s_seed, "Master seed");
  synth->add_option("--workers", s_workers, "Worker threads");
  synth->add_option("--desk-corpus", s_desk_size,
                    "Generate a synthetic corpus of this many claims into --dataset first");

  // loop
  auto* loop = app.add_subcommand("loop", "Run the extract / fact-check / DPO loop");
  LoopFlags lf;
  add_loop_flags(*loop, lf);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Evaluate seed, tweet and zero-shot inputs");
  std::string b_run_dir, b_generator = "template", b_fc = "oracle";
  std::vector<std::string> b_variants;
  std::uint64_t b_seed = 0;
  std::size_t b_workers = 1;
  baseline->add_option("--run-dir", b_run_dir, "Run directory holding dataset and posts")
      ->required();
  baseline->add_option("--variants", b_variants,
                       "Subset of seed, tweet, zeroshot_core, zeroshot_checkworthy");
  baseline->add_option("--generator", b_generator, "template or remote");
  baseline->add_option("--fact-checker", b_fc, "oracle or remote");
  baseline->add_option("--seed", b_seed, "Seed for zero-shot generation");
  baseline->add_option("--workers", b_workers, "Worker threads");

  // report
  auto* report = app.add_subcommand("report", "Tabulate a run directory");
  std::string r_run_dir;
  report->add_option("--run-dir", r_run_dir, "Run directory")->required();

  // check-backends
  auto* check = app.add_subcommand("check-backends", "Probe the configured backends");
  std::string c_generator = "template", c_fc = "oracle";
  check->add_option("--generator", c_generator, "template or remote");
  check->add_option("--fact-checker", c_fc, "oracle or remote");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    if (s_dataset.empty()) throw ValidationError("--dataset is required");
    if (s_desk_size > 0) {
      DeskCorpusOptions opts;
      opts.size = s_desk_size;
      opts.seed = s_seed;
      save_dataset(s_dataset, generate_desk_corpus(opts));
      s_schema = "native";
    }
    const Dataset ds = load_dataset(s_dataset, parse_schema(s_schema));
    auto gen = make_generator(s_generator);
    const auto tweets = synthesize_corpus(*gen, ds, mix_seed(s_seed, "tweets"), s_workers);
    save_tweets(s_out, tweets);
    std::cout << "wrote " << tweets.size() << " posts to " << s_out << "\n";
  } else if (loop->parsed()) {
    const LoopConfig cfg = resolve_loop_config(lf);
    auto gen = make_generator(cfg.generator);
    auto fc = make_fact_checker(cfg.fact_checker);
    const auto states = run_loop(cfg, *gen, *fc, lf.resume);
    std::cout << write_report(cfg.run_dir);
    std::cout << states.size() << " iteration states in " << cfg.run_dir.string() << "\n";
  } else if (baseline->parsed()) {
    const RunLayout layout{b_run_dir};
    const Dataset ds = load_dataset(layout.dataset(), DatasetSchema::kNative);
    const auto tweets = load_tweets(layout.tweets(), ds);
    auto gen = make_generator(b_generator);
    auto fc = make_fact_checker(b_fc);
    std::vector<InputVariant> variants;
    if (b_variants.empty()) {
      variants.assign(baseline_variants().begin(), baseline_variants().end());
    }
    for (const auto& name : b_variants) {
      const auto v = InputVariant::parse(name);
      if (!v || v->kind == InputVariant::Kind::kDpoIteration) {
        throw ValidationError("unknown baseline variant \"" + name + "\"");
      }
      variants.push_back(*v);
    }
    EvaluationInputs in;
    in.dataset = &ds;
    in.tweets = tweets;
    in.generator = gen.get();
    in.workers = b_workers;
    in.seed = b_seed;
    for (const auto& v : variants) {
      const VariantEvaluation e = evaluate_variant(v, in, *fc);
      save_baseline(layout, e);
      std::cout << v.name() << ": weighted F1 " << e.classification.weighted_f1 << "\n";
    }
  } else if (report->parsed()) {
    std::cout << write_report(r_run_dir);
  } else if (check->parsed()) {
    auto gen = make_generator(c_generator);
    auto fc = make_fact_checker(c_fc);
    std::cout << "generator: " << gen->model_id() << "\n";
    const Verdict v = predict(*fc, "Regular exercise prevents influenza",
                              "A systematic review found that regular exercise prevents influenza.");
    std::cout << "fact checker: " << fc->name() << " -> " << label_name(v.label) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const claimdpo::ExtractionError& e) {
    std::cerr << "error: " << e.what() << "\nraw reply: " << e.raw_text() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return EXIT_FAILURE;
}
