// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace claimdpo {

using Json = nlohmann::json;

// One JSON object per non-blank line. Throws ParseError naming the line.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records);

std::string read_text_file(const std::filesystem::path& path);
// Writes through a temporary file and renames, so readers never see a
// half-written file.
void write_text_file(const std::filesystem::path& path, const std::string& content);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

}  // namespace claimdpo
