// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "claimdpo/policy.hpp"
#include "claimdpo/tokenizer.hpp"

namespace claimdpo {

struct Checkpoint {
  Tokenizer tokenizer;
  PolicyParams params;
};

// Versioned little-endian binary container: magic, version, dimensions,
// vocabulary, then every tensor as raw IEEE doubles. Reloading reproduces
// sequence_logprob bit for bit.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace claimdpo
