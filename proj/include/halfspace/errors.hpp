#pragma once

#include <stdexcept>
#include <string>

namespace halfspace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or evaluation point was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or within the guard radius of) an inversion center.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// No violation-free plane was found on a moving-plane sweep grid.
class SweepFailure : public Error {
 public:
  using Error::Error;
};

/// Root bracket endpoints do not straddle a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// ODE integration left the representable range.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// A refinement study hit a non-converged solve.
class StudyError : public Error {
 public:
  using Error::Error;
};

}  // namespace halfspace
