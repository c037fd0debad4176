// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "claimdpo/jsonl.hpp"

namespace claimdpo {

struct RemoteEndpoint {
  std::string base_url;  // "http://host:port"
  double timeout_seconds = 30.0;
  int max_retries = 2;   // attempts after the first one
  std::string api_key;   // sent as a bearer token when non-empty

  // Reads `url_var` (and CLAIMDPO_API_KEY) from the environment.
  static std::optional<RemoteEndpoint> from_env(const char* url_var);
};

// POSTs a JSON body and parses a JSON reply. Connection failures, timeouts
// and 5xx statuses are retried, then surface as TransportError. Other
// non-200 statuses and unparsable bodies raise ProtocolError.
Json post_json(const RemoteEndpoint& ep, const std::string& path, const Json& body);
Json get_json(const RemoteEndpoint& ep, const std::string& path);

}  // namespace claimdpo
