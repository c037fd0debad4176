// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace claimdpo {

// Declaration order is the fixed tie-break order for argmax.
enum class Label { kSupported = 0, kRefuted = 1, kNeutral = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::kSupported, Label::kRefuted, Label::kNeutral};

inline constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

std::string_view label_name(Label l);     // "Supported"
std::string_view label_wire_key(Label l);  // "supported"
// Accepts the canonical names, case-insensitively.
std::optional<Label> parse_label(std::string_view s);

enum class Split { kTrain, kDev, kTest };

std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view s);

}  // namespace claimdpo
