#pragma once

#include <stdexcept>
#include <string>

namespace specdim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (negative mass, a >= b, bad flag value, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; `line` is 1-based.
class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A quantity cannot be represented (e.g. a distribution function that is infinite everywhere).
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Finite data is insufficient to decide; the caller must supply an override.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// The data contradicts a previously chosen branch (e.g. divergence in the summable branch).
class ContradictionError : public Error {
 public:
  using Error::Error;
};

/// A mathematical identity that must hold on valid input was violated.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A requested computation exceeds a fixed resource bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace specdim
