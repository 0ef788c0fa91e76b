#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bmerge {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A precondition of an operation does not hold (bad arguments, wrong shapes).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Variable universe or base count exceeds the configured enumeration cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableBase : public Error {
 public:
  UnsatisfiableBase(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// A result failed its own re-verification. Always a bug, never user error.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

// The labeling procedure met a maxset carrying two labels.
class NotAcyclic : public Error {
 public:
  using Error::Error;
};

}  // namespace bmerge
