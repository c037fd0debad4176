// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "claimdpo/data.hpp"
#include "claimdpo/dpo.hpp"
#include "claimdpo/policy.hpp"
#include "claimdpo/synthesis.hpp"

namespace claimdpo::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Policy with every tensor (adapter included, when enabled) filled with
// N(0, scale^2) draws.
PolicyParams random_policy(const PolicyDims& dims, bool adapter, Rng& rng, double scale = 0.5);

// Uniform tokens in [kNumReserved, vocab), never EOS.
std::vector<TokenId> random_tokens(Rng& rng, std::size_t vocab, std::size_t len);

// Ordered extraction of `source` (random subset, at least one token) + EOS.
std::vector<TokenId> random_extraction(Rng& rng, const std::vector<TokenId>& source);

// Random preference pair; with `extractive`, both completions are distinct
// extractions of a shared source.
EncodedPair random_pair(Rng& rng, std::size_t vocab, bool extractive, const std::string& id);

// Desk corpus + template posts written to dir/dataset.jsonl and
// dir/tweets.jsonl.
void write_desk_inputs(const std::filesystem::path& dir, std::size_t size, std::uint64_t seed);

}  // namespace claimdpo::testing
