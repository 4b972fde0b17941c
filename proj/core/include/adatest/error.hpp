#pragma once

#include <stdexcept>
#include <string>

namespace adatest {

// Caller supplied an invalid argument, option or configuration value.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data (netlist, pattern file, JSON document) is malformed or
// inconsistent with the objects it refers to.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + message
                            : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A netlist-level operation was asked to work on a sequential netlist.
class SequentialNetlistError : public InputError {
 public:
  SequentialNetlistError()
      : InputError("netlist contains flip-flops; unroll it first") {}
};

// An internal postcondition failed. Always a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace adatest
