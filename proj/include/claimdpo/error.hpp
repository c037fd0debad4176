// Copyright 2026 The claimdpo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace claimdpo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input at a known line (1-based) of a line-delimited file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A record or argument violated a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Network failure talking to a remote backend; safe to retry.
class TransportError : public Error {
 public:
  using Error::Error;
  bool retryable() const { return true; }
};

// The remote peer answered, but the reply breaks the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A generator reply could not be unwrapped into plain text.
class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& what, std::string raw)
      : Error(what), raw_(std::move(raw)) {}
  const std::string& raw_text() const { return raw_; }

 private:
  std::string raw_;
};

}  // namespace claimdpo
