#pragma once

#include <stdexcept>
#include <string>

namespace splitsea {

// Every failure mode gets its own type so callers (and the CLI exit-code
// mapping) can tell configuration mistakes from numerical breakdown.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Model coupling outside its valid range (c <= 0, zeta outside (0,pi), ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Evaluation of a tabulated function outside its range.
class RangeError : public Error {
public:
  using Error::Error;
};

// Malformed sea/block/run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Nystrom matrix numerically singular (condition estimate > 1e12).
class SingularSystemError : public Error {
public:
  using Error::Error;
};

// Iterative solver failed to reach tolerance.
class NonConvergenceError : public Error {
public:
  NonConvergenceError(const std::string& msg, double residual)
      : Error(msg + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

// Two redundant computations of the same quantity disagree.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

// Finite states differ by more than the stated excitation.
class AlignmentError : public Error {
public:
  using Error::Error;
};

// Improper tail integral failed its convergence check.
class TailTruncationError : public Error {
public:
  using Error::Error;
};

// Operation requires a reflection-symmetric sea configuration.
class SymmetryError : public Error {
public:
  using Error::Error;
};

// Symmetric quantum numbers with mismatched parity.
class ParityError : public Error {
public:
  using Error::Error;
};

// Impurity rapidity or quantum number on the wrong side of the seas.
class PlacementError : public Error {
public:
  using Error::Error;
};

}  // namespace splitsea
