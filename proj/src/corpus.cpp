// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/corpus.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string_view>

#include "claimdpo/error.hpp"
#include "claimdpo/random.hpp"
#include "fmt/format.h"

namespace claimdpo {
namespace {

struct Subject {
  std::string_view text;
  bool plural;
};

struct Predicate {
  std::string_view singular;
  std::string_view base;  // plural and negated form
};

constexpr std::array<Subject, 16> kSubjects = {{
    {"Drinking boiled garlic water", false},
    {"Vitamin C supplements", true},
    {"Hydroxychloroquine", false},
    {"Social distancing", false},
    {"Wearing face masks", false},
    {"Zinc lozenges", true},
    {"Ivermectin", false},
    {"Frequent hand washing", false},
    {"Regular exercise", false},
    {"Remdesivir", false},
    {"Green tea extract", false},
    {"Vitamin D", false},
    {"Steam inhalation", false},
    {"Convalescent plasma", false},
    {"Gargling salt water", false},
    {"Eating raw onions", false},
}};

constexpr std::array<Predicate, 6> kPredicates = {{
    {"cures", "cure"},
    {"prevents", "prevent"},
    {"reduces the severity of", "reduce the severity of"},
    {"lowers the risk of", "lower the risk of"},
    {"protects against", "protect against"},
    {"shortens recovery from", "shorten recovery from"},
}};

constexpr std::array<std::string_view, 8> kObjects = {
    "COVID-19",           "SARS-CoV-2 infection", "severe pneumonia",   "long covid",
    "hospital admission", "the common cold",      "influenza",          "respiratory illness",
};

struct ClaimShape {
  std::size_t subject = 0;
  std::size_t predicate = 0;
  std::size_t object = 0;
  bool negated = false;
};

std::string render(const ClaimShape& s, bool negated, std::string_view auxiliary = {}) {
  const Subject& subj = kSubjects[s.subject];
  const Predicate& pred = kPredicates[s.predicate];
  const std::string_view obj = kObjects[s.object];
  if (!negated) {
    return fmt::format("{} {} {}", subj.text, subj.plural ? pred.base : pred.singular, obj);
  }
  const std::string_view aux = auxiliary.empty() ? (subj.plural ? "do" : "does") : auxiliary;
  return fmt::format("{} {} not {} {}", subj.text, aux, pred.base, obj);
}

std::string lower_first(std::string s) {
  // Only the sentence-initial capital is dropped; acronyms stay intact.
  if (s.size() > 1 && std::isupper(static_cast<unsigned char>(s[0])) &&
      std::islower(static_cast<unsigned char>(s[1]))) {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
  return s;
}

constexpr std::array<std::string_view, 4> kSupportFrames = {
    "A randomized controlled trial concluded that {}.",
    "Pooled clinical data show that {}.",
    "Health authorities report that {}.",
    "A systematic review found that {}.",
};

constexpr std::array<std::string_view, 2> kRefuteFrames = {
    "There is no evidence that {}.",
    "Controlled trials could not confirm that {}.",
};

template <std::size_t N>
std::string frame(const std::array<std::string_view, N>& frames, Rng& rng, const std::string& s) {
  return fmt::format(fmt::runtime(frames[uniform_index(rng, N)]), s);
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace

Dataset generate_desk_corpus(const DeskCorpusOptions& opts) {
  const std::size_t combos = kSubjects.size() * kPredicates.size() * kObjects.size();
  if (opts.size < 10 || opts.size > combos) {
    throw ValidationError(fmt::format("desk corpus size must lie in [10, {}]", combos));
  }
  Rng rng(mix_seed(opts.seed, "desk-corpus"));

  // Distinct claim shapes, sampled without replacement.
  std::vector<std::size_t> codes(combos);
  for (std::size_t i = 0; i < combos; ++i) codes[i] = i;
  shuffle(codes, rng);
  std::vector<ClaimShape> shapes;
  for (std::size_t i = 0; i < opts.size; ++i) {
    std::size_t c = codes[i];
    ClaimShape s;
    s.negated = uniform01(rng) < 0.25;
    s.object = c % kObjects.size();
    c /= kObjects.size();
    s.predicate = c % kPredicates.size();
    c /= kPredicates.size();
    s.subject = c % kSubjects.size();
    shapes.push_back(s);
  }

  const std::size_t n = opts.size;
  const auto n_sup = static_cast<std::size_t>(std::llround(0.4 * static_cast<double>(n)));
  const auto n_ref = static_cast<std::size_t>(std::llround(0.3 * static_cast<double>(n)));
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(i < n_sup ? Label::kSupported
                               : i < n_sup + n_ref ? Label::kRefuted : Label::kNeutral);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  shuffle(order, rng);

  const auto n_train = static_cast<std::size_t>(std::llround(0.6 * static_cast<double>(n)));
  const auto n_dev = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(n)));
  std::vector<std::size_t> split_order(n);
  for (std::size_t i = 0; i < n; ++i) split_order[i] = i;
  shuffle(split_order, rng);
  std::vector<Split> splits(n);
  for (std::size_t r = 0; r < n; ++r) {
    splits[split_order[r]] =
        r < n_train ? Split::kTrain : r < n_train + n_dev ? Split::kDev : Split::kTest;
  }

  std::vector<ClaimRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    const ClaimShape& s = shapes[i];
    const Label label = labels[order[i]];
    const std::string claim = render(s, s.negated);
    std::string evidence;
    switch (label) {
      case Label::kSupported:
        evidence = frame(kSupportFrames, rng, lower_first(render(s, s.negated, "did")));
        break;
      case Label::kRefuted:
        evidence = s.negated ? frame(kSupportFrames, rng, lower_first(render(s, false)))
                             : frame(kRefuteFrames, rng, lower_first(render(s, false)));
        break;
      case Label::kNeutral: {
        ClaimShape other = s;
        const bool hard = uniform01(rng) < opts.hard_neutral_share;
        if (!hard) {
          other.subject = (s.subject + 1 + uniform_index(rng, kSubjects.size() - 1)) %
                          kSubjects.size();
        }
        other.object = (s.object + 1 + uniform_index(rng, kObjects.size() - 1)) % kObjects.size();
        evidence = frame(kSupportFrames, rng, lower_first(render(other, s.negated, "did")));
        break;
      }
    }
    records.push_back(
        ClaimRecord{fmt::format("c{:04d}", i + 1), claim, evidence, label, splits[i]});
  }
  return Dataset(std::move(records));
}

}  // namespace claimdpo
