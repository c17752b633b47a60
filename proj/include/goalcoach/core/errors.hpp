// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace goalcoach {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedBelief : public Error {
 public:
  using Error::Error;
};

/// A learned or rule component failed to produce a usable answer.
class BackendFailure : public Error {
 public:
  using Error::Error;
};

class ParaphraserFailure : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};

/// Malformed empathy training sequence; `offset` is the byte position where
/// parsing stopped.
class CodecError : public Error {
 public:
  CodecError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Corpus/record schema violation. `line` is 1-based, 0 when unknown.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class AlreadyClosed : public Error {
 public:
  using Error::Error;
};

class DataTooSmall : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace goalcoach
