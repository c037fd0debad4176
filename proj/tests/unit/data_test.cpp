// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <set>

#include "claimdpo/corpus.hpp"
#include "claimdpo/data.hpp"
#include "claimdpo/error.hpp"
#include "claimdpo/factcheck.hpp"
#include "claimdpo/jsonl.hpp"
#include "unit/test_support.hpp"

namespace claimdpo {
namespace {

using testing::TempDir;

ClaimRecord rec(std::string id, Split split = Split::kTrain) {
  return {std::move(id), "Vitamin D prevents influenza",
          "A review found that vitamin D prevents influenza.", Label::kSupported, split};
}

TEST(Dataset, RejectsDuplicateIdsNamingTheId) {
  try {
    Dataset ds({rec("c1"), rec("c1")});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate claim id \"c1\""), std::string::npos);
  }
}

TEST(Dataset, RejectsBlankFields) {
  ClaimRecord r = rec("c1");
  r.evidence = "   ";
  EXPECT_THROW(Dataset({r}), ValidationError);
  r = rec("c1");
  r.seed_claim = "";
  EXPECT_THROW(Dataset({r}), ValidationError);
}

TEST(Dataset, SplitCountsAndLookup) {
  Dataset ds({rec("a", Split::kTrain), rec("b", Split::kTest), rec("c", Split::kTest),
              rec("d", Split::kDev)});
  const SplitCounts c = ds.split_counts();
  EXPECT_EQ(c.train, 1U);
  EXPECT_EQ(c.dev, 1U);
  EXPECT_EQ(c.test, 2U);
  EXPECT_EQ(c.train + c.dev + c.test, ds.size());
  EXPECT_EQ(ds.at("c").id, "c");
  EXPECT_EQ(ds.find("zzz"), nullptr);
  EXPECT_THROW(ds.at("zzz"), std::exception);
  ASSERT_EQ(ds.in_split(Split::kTest).size(), 2U);
  EXPECT_EQ(ds.in_split(Split::kTest)[0]->id, "b");
}

TEST(LoadDataset, NativeRoundTrip) {
  TempDir dir;
  Dataset ds({rec("a"), rec("b", Split::kTest)});
  save_dataset(dir / "ds.jsonl", ds);
  const Dataset back = load_dataset(dir / "ds.jsonl", DatasetSchema::kNative);
  ASSERT_EQ(back.size(), 2U);
  EXPECT_EQ(back.records()[0], ds.records()[0]);
  EXPECT_EQ(back.records()[1], ds.records()[1]);
}

TEST(LoadDataset, HealthverLikeMapsLabels) {
  TempDir dir;
  write_text_file(dir / "hv.jsonl",
                  R"({"id":"1","claim":"x cures y","evidence":"e","label":"SUPPORTS","split":"train"})"
                  "\n\n"
                  R"({"id":"2","claim":"x cures y","evidence":"e","label":"Not Enough Info","split":"test"})"
                  "\n");
  const Dataset ds = load_dataset(dir / "hv.jsonl", DatasetSchema::kHealthverLike);
  ASSERT_EQ(ds.size(), 2U);
  EXPECT_EQ(ds.at("1").gold_label, Label::kSupported);
  EXPECT_EQ(ds.at("2").gold_label, Label::kNeutral);
}

TEST(LoadDataset, ErrorsNameLineAndValue) {
  TempDir dir;
  write_text_file(dir / "bad.jsonl",
                  R"({"id":"1","claim":"x","evidence":"e","label":"SUPPORTS","split":"train"})"
                  "\n"
                  R"({"id":"2","claim":"x","evidence":"e","label":"MAYBE","split":"train"})"
                  "\n");
  try {
    load_dataset(dir / "bad.jsonl", DatasetSchema::kHealthverLike);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
    EXPECT_NE(std::string(e.what()).find("MAYBE"), std::string::npos);
  }
  write_text_file(dir / "broken.jsonl", "{\"id\": \n");
  EXPECT_THROW(load_dataset(dir / "broken.jsonl", DatasetSchema::kNative), ParseError);
  write_text_file(dir / "missing.jsonl", R"({"id":"1","seed_claim":"x","gold_label":"Supported","split":"train"})");
  EXPECT_THROW(load_dataset(dir / "missing.jsonl", DatasetSchema::kNative), ParseError);
  EXPECT_THROW(load_dataset(dir / "absent.jsonl", DatasetSchema::kNative), Error);
}

TEST(LabelMap, BuiltinMatchesShippedConfig) {
  const LabelMap file = LabelMap::load(CLAIMDPO_LABEL_MAP_FILE);
  EXPECT_EQ(file.version(), LabelMap::builtin().version());
  for (const char* raw : {"SUPPORTS", "refutes", "Neutral", "NOT ENOUGH INFO", "not_enough_info",
                          "Supported", "Refuted"}) {
    EXPECT_EQ(file.lookup(raw), LabelMap::builtin().lookup(raw)) << raw;
    EXPECT_TRUE(file.lookup(raw).has_value()) << raw;
  }
  EXPECT_FALSE(file.lookup("maybe").has_value());
}

TEST(LabelMap, RejectsUnknownTargets) {
  EXPECT_THROW(LabelMap::from_json(Json{{"version", 1}, {"labels", {{"x", "Maybe"}}}}),
               ValidationError);
  EXPECT_THROW(LabelMap::from_json(Json{{"labels", Json::object()}}), ValidationError);
}

TEST(DeskCorpus, ShapeAndLabelBalance) {
  const Dataset ds = generate_desk_corpus();
  ASSERT_EQ(ds.size(), 200U);
  const SplitCounts c = ds.split_counts();
  EXPECT_EQ(c.train, 120U);
  EXPECT_EQ(c.dev, 20U);
  EXPECT_EQ(c.test, 60U);
  std::array<int, kNumLabels> labels{};
  std::set<std::string> claims;
  for (const auto& r : ds.records()) {
    ++labels[index_of(r.gold_label)];
    claims.insert(r.seed_claim);
  }
  EXPECT_EQ(labels[index_of(Label::kSupported)], 80);
  EXPECT_EQ(labels[index_of(Label::kRefuted)], 60);
  EXPECT_EQ(labels[index_of(Label::kNeutral)], 60);
  EXPECT_EQ(claims.size(), ds.size());
  EXPECT_EQ(ds.records()[0].id, "c0001");
}

TEST(DeskCorpus, DeterministicPerSeed) {
  DeskCorpusOptions a;
  const Dataset x = generate_desk_corpus(a);
  const Dataset y = generate_desk_corpus(a);
  a.seed = 8;
  const Dataset z = generate_desk_corpus(a);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x.records()[i], y.records()[i]);
  bool differs = false;
  for (std::size_t i = 0; i < x.size(); ++i) differs |= !(x.records()[i] == z.records()[i]);
  EXPECT_TRUE(differs);
  DeskCorpusOptions bad;
  bad.size = 5;
  EXPECT_THROW(generate_desk_corpus(bad), ValidationError);
}

TEST(DeskCorpus, SeedClaimsAreMostlyRecoverableByTheOracle) {
  // Hard Neutral cases keep the subject, so the seed claim is not a perfect
  // input, but the overwhelming majority should be decided correctly.
  const Dataset ds = generate_desk_corpus();
  LexicalOracle oracle;
  int correct = 0;
  for (const auto& r : ds.records()) {
    correct += oracle.check(r.seed_claim, r.evidence).label == r.gold_label ? 1 : 0;
  }
  EXPECT_GT(correct, 170);
  EXPECT_LT(correct, 200);
}

}  // namespace
}  // namespace claimdpo
