#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace absparse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input exceeded the dense-enumeration limit.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed function file or textual value; carries the 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Largest group order (or coset count) we are willing to enumerate densely.
inline constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 24;

}  // namespace absparse
