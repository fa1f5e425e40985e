// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace nslice {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unreadable configuration. `field` is the dotted key at fault.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)), message_(message) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

/// An argument outside the mathematical domain of a model formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an API precondition (shape mismatch, step after done, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or gradient during optimisation.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// The replay buffer holds fewer transitions than requested.
class NotReadyError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nslice
