/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every module.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace notegrade {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value is outside the domain of an operation (rest passed as a pitch, empty chord).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Pitch arithmetic produced a value outside MIDI 0..127.
class ConversionError : public Error {
 public:
  using Error::Error;
};

/// Line/column position in source text. Both are 1-based; 0 means unknown.
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
  bool operator==(const SourceLocation&) const = default;
};

/// Structured failure while reading notation text.
class ParseError : public Error {
 public:
  ParseError(std::string rule_id, SourceLocation where, const std::string& message);

  const std::string& rule_id() const noexcept { return rule_id_; }
  SourceLocation where() const noexcept { return where_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string rule_id_;
  SourceLocation where_;
  std::string detail_;
};

/// Ground-truth document does not match its schema. The sample is unusable.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Bad weights, grids or other configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Ground truth missing or corrupt during a batch run. Maps to exit code 2.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Projection met an event it cannot express as pitch tokens.
class ProjectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace notegrade
