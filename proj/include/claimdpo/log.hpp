// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fmt/core.h>

#include <atomic>
#include <cstdio>

namespace claimdpo {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kQuiet = 3 };

inline std::atomic<LogLevel>& log_level() {
  static std::atomic<LogLevel> level{LogLevel::kWarn};
  return level;
}

template <typename... Args>
void log(LogLevel level, fmt::format_string<Args...> f, Args&&... args) {
  if (level < log_level().load()) return;
  static constexpr const char* kTags[] = {"debug", "info", "warn", ""};
  fmt::print(stderr, "[{}] {}\n", kTags[static_cast<int>(level)],
             fmt::format(f, std::forward<Args>(args)...));
}

}  // namespace claimdpo
