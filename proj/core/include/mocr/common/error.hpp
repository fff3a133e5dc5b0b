#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mocr {

/// Base class of every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or contradictory configuration: bad flag combinations, malformed
/// config files, prompt templates missing a required placeholder.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (unreadable file, failed write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries a 1-based line/column when the parser can
/// pinpoint one; both are 0 when only a byte offset is known.
class TextParseError : public Error {
 public:
  TextParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  explicit TextParseError(const std::string& message) : Error(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// Markup parsed but violates a structural requirement (no svg root,
/// viewBox underivable).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// HTTP-level failure after the retry budget is spent, or a permanent
/// (non-retryable) response such as a 401.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// The judge answered but no verdict could be extracted, or the judge call
/// failed outright; the owning battle is marked failed, never tied.
class JudgeFailure : public Error {
 public:
  using Error::Error;
};

/// SVG could not be rasterized (unparseable markup, no svg root, bad geometry).
class RenderError : public Error {
 public:
  using Error::Error;
};

}  // namespace mocr
