#ifndef MINIMAX_ERRORS_HPP_
#define MINIMAX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace minimax {

// Base of every error raised by the library. The CLI maps these to exit code 2
// (configuration) or lets ConvexityError propagate as an internal failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// The per-step moment problem has no feasible law (v > zeta^2).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (negative price, log of t <= -1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Price outside a value-function or policy grid.
class ExtentError : public Error {
 public:
  using Error::Error;
};

// A computed value function lost convexity beyond tolerance.
class ConvexityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedStrategy : public Error {
 public:
  using Error::Error;
};

}  // namespace minimax

#endif  // MINIMAX_ERRORS_HPP_
