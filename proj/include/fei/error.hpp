#pragma once

#include <stdexcept>
#include <string>

namespace fei {

/// Base of everything the library throws on bad input.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, e.g. "capacity".
  virtual const char* kind() const noexcept = 0;
};

/// Request exceeds a configured size limit (arity cap, enumeration budget).
class CapacityError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity"; }
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// A spectrum whose inverse transform is not a +/-1 valued function.
class NotBooleanError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_boolean"; }
};

/// A spectrum violating Parseval, so it is not a probability distribution.
class InvalidSpectrumError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_spectrum"; }
};

/// Malformed textual input (hex tables, family strings).
class ParseError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

}  // namespace fei
