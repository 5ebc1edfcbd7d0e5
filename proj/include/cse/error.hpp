#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cse {

// Base for every error raised by the library. Validation failures (bad
// inputs, broken invariants) derive from this directly; I/O problems use
// IoError so front-ends can tell the two apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A text input could not be parsed. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A code table row is internally inconsistent. row() is 0-based.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t row)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Binary stream failed a magic, framing or bounds check.
class CorruptStream : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cse
