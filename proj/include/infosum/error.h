#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infosum {

// All library failures surface as Error. `code()` is a short stable
// identifier ("empty-sentence", "layout-mismatch", ...) that callers and
// tests can match on; what() carries the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Raised by the line-oriented readers (corpus JSONL, lexicon TSV, labels).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse-error", "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace infosum
