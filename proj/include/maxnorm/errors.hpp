#ifndef MAXNORM_ERRORS_HPP_
#define MAXNORM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace maxnorm {

/// Invalid argument supplied by the caller (bad dimension, negative weight, ...).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// An internal precondition was violated (e.g. a matrix that must be
/// symmetric no longer is).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Numerical failure inside a solver; carries the iteration at which it
/// occurred (-1 when not applicable).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long iteration = -1)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace maxnorm

#endif  // MAXNORM_ERRORS_HPP_
