#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hba {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (e.g. a controller returned a
// distribution that does not sum to one).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A path is prefixed by a terminating path or is otherwise inconsistent.
class InvalidPath : public Error {
 public:
  using Error::Error;
};

// Planning would grow the projected history past the configured cap.
class HorizonLimit : public Error {
 public:
  using Error::Error;
};

// Planning requested at or after the last round of a repeated game.
class MatchOver : public Error {
 public:
  using Error::Error;
};

// Random instance generation could not satisfy the placement constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Two record sets cannot be compared pairwise.
class PairingError : public Error {
 public:
  using Error::Error;
};

// Configuration failed validation. `line` is 1-based, 0 if unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hba
