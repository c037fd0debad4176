// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace claimdpo {

// All randomness in the project flows through this engine. The helpers below
// avoid the std distributions so draws are identical across standard
// libraries.
using Rng = std::mt19937_64;

// Derives an independent stream seed, e.g. one per claim id, so that results
// never depend on scheduling order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value);
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);

// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Standard normal via Box-Muller.
double standard_normal(Rng& rng);

}  // namespace claimdpo
