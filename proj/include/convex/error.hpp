#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace convex {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file did not conform to its format. `line()` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A node id that does not belong to the graph.
class UnknownNode : public Error {
 public:
  explicit UnknownNode(std::size_t id)
      : Error("unknown node id " + std::to_string(id)) {}
};

// The context has no candidates left to expand into.
class UnexpandableContext : public Error {
 public:
  using Error::Error;
};

}  // namespace convex
