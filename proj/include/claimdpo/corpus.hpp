// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "claimdpo/data.hpp"

namespace claimdpo {

// Synthetic health-claim corpus for offline runs. Claims are
// "<subject> <predicate> <object>", about a quarter of them negated. Labels
// are 40% Supported, 30% Refuted, 30% Neutral:
//   Supported evidence restates the claim;
//   Refuted evidence negates it (or states the affirmative form of a
//   negated claim);
//   Neutral evidence concerns a different subject and object, except for a
//   small share of hard cases that keep the subject.
// Splits are 60% train, 10% dev, 30% test. Ids are "c0001", "c0002", ...
struct DeskCorpusOptions {
  std::size_t size = 200;
  std::uint64_t seed = 7;
  double hard_neutral_share = 0.25;  // of the Neutral claims
};

Dataset generate_desk_corpus(const DeskCorpusOptions& opts = {});

}  // namespace claimdpo
