#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rydmw {

// Poles (or a denominator) too close to zero separation / magnitude to trust
// the partial-fraction form. Callers fall back to direct evaluation.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lindblad steady state not unique or numerically unreliable.
class SteadyStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fit ran out of iterations or hit an unusable window.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expected a specific number of transmission dips and found another.
class DipCountError : public std::runtime_error {
 public:
  DipCountError(std::size_t expected, std::size_t found)
      : std::runtime_error("expected " + std::to_string(expected) + " dips, found " +
                           std::to_string(found)),
        found_(found) {}
  std::size_t found() const { return found_; }

 private:
  std::size_t found_;
};

// Malformed input file; line is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rydmw
