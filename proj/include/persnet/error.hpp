#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace persnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two markings (or a marking and a net) live over different place universes.
class UniverseMismatch : public Error {
public:
  using Error::Error;
};

/// Subtraction u - v attempted while u does not cover v.
class NotCovered : public Error {
public:
  NotCovered(const std::string& place, const std::string& what)
      : Error(what), place_(place) {}
  const std::string& place() const noexcept { return place_; }

private:
  std::string place_;
};

/// A transition multiset was fired from a marking that does not enable it.
class NotEnabled : public Error {
public:
  NotEnabled(const std::string& place, const std::string& what)
      : Error(what), place_(place) {}
  const std::string& place() const noexcept { return place_; }

private:
  std::string place_;
};

/// A structure violates an axiom required by the operation (cycle in
/// causality, invalid configuration, invalid equivalence, ...).
class InvalidStructure : public Error {
public:
  using Error::Error;
};

/// Unknown identifier or out-of-range index.
class UnknownId : public Error {
public:
  using Error::Error;
};

/// A bounded search gave up before reaching a verdict.
class BudgetExceeded : public Error {
public:
  using Error::Error;
};

/// Text-format error with a 1-based source location.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace persnet
