// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#include "claimdpo/http.hpp"

#include <cstdlib>

#include "claimdpo/error.hpp"
#include "claimdpo/log.hpp"
#include "httplib.h"

namespace claimdpo {

std::optional<RemoteEndpoint> RemoteEndpoint::from_env(const char* url_var) {
  const char* url = std::getenv(url_var);
  if (url == nullptr || *url == '\0') return std::nullopt;
  RemoteEndpoint ep;
  ep.base_url = url;
  if (const char* key = std::getenv("CLAIMDPO_API_KEY")) ep.api_key = key;
  return ep;
}

namespace {

template <typename Call>
Json with_retries(const RemoteEndpoint& ep, const std::string& path, Call&& call) {
  httplib::Client cli(ep.base_url);
  const auto secs = static_cast<time_t>(ep.timeout_seconds);
  const auto usecs = static_cast<time_t>((ep.timeout_seconds - static_cast<double>(secs)) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  if (!ep.api_key.empty()) cli.set_bearer_token_auth(ep.api_key);

  std::string last_error;
  for (int attempt = 0; attempt <= ep.max_retries; ++attempt) {
    auto res = call(cli);
    if (!res) {
      last_error = httplib::to_string(res.error());
      log(LogLevel::kWarn, "{}{}: transport error ({}), attempt {}", ep.base_url, path,
          last_error, attempt + 1);
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError(ep.base_url + path + ": HTTP " + std::to_string(res->status) + ": " +
                          res->body);
    }
    Json j = Json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw ProtocolError(ep.base_url + path + ": reply is not JSON");
    return j;
  }
  throw TransportError(ep.base_url + path + ": " + last_error);
}

}  // namespace

Json post_json(const RemoteEndpoint& ep, const std::string& path, const Json& body) {
  const std::string payload = body.dump();
  return with_retries(ep, path, [&](httplib::Client& cli) {
    return cli.Post(path, payload, "application/json");
  });
}

Json get_json(const RemoteEndpoint& ep, const std::string& path) {
  return with_retries(ep, path, [&](httplib::Client& cli) { return cli.Get(path); });
}

}  // namespace claimdpo
