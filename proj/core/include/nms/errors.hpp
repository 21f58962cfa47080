#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nms {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Well-formed input that violates a domain rule (negative size, unknown venue, ...).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class NotFound : public Error {
public:
  using Error::Error;
};

class RejectedOrder : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace nms
