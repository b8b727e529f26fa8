#pragma once

#include <stdexcept>
#include <string>

namespace bbl {

// Raised when an argument falls outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Two points with more than one minimizing geodesic between them.
class CutLocusError : public DomainError {
 public:
  explicit CutLocusError(const std::string& what) : DomainError(what) {}
};

// Operation not available for the given representation or dimension.
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        message_(what),
        line_(line),
        column_(column) {}
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

}  // namespace bbl
