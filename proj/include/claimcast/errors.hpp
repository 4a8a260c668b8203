#ifndef CLAIMCAST_ERRORS_HPP
#define CLAIMCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace claimcast {

// Bad user input: unreadable files, malformed config, missing data.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A CSV row that cannot be parsed; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, long line)
      : InputError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Data that parses but violates a portfolio invariant (names the claim).
class ValidationError : public InputError {
 public:
  explicit ValidationError(const std::string& msg) : InputError(msg) {}
};

// Evaluation outside a model's time or parameter domain.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical machinery failure (quadrature non-convergence, singular
// systems, non-finite intensities).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A thinning proposal exceeded its majorant; the replicate is aborted
// rather than silently biased.
class MajorantViolation : public NumericalError {
 public:
  explicit MajorantViolation(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace claimcast

#endif  // CLAIMCAST_ERRORS_HPP
