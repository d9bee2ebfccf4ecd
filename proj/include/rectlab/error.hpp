#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rectlab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (p ∉ [1/e, 1), r > n, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An exact solver refused an instance because a size guard or work budget
/// tripped. `guard` names the limit, `fallback` names what to call instead.
class SizeGuardError : public Error {
 public:
  SizeGuardError(std::string guard, std::string fallback, const std::string& what)
      : Error(what + " [guard: " + guard + "; fallback: " + fallback + "]"),
        guard_(std::move(guard)),
        fallback_(std::move(fallback)) {}

  const std::string& guard() const { return guard_; }
  const std::string& fallback() const { return fallback_; }

 private:
  std::string guard_;
  std::string fallback_;
};

enum class ParseErrorKind { bad_header, dimension_mismatch, illegal_character, truncated };

/// Malformed bmat input. `line()` is 1-based and counts every physical line,
/// comment lines included.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : Error("line " + std::to_string(line) + ": " + detail), kind_(kind), line_(line) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

}  // namespace rectlab
