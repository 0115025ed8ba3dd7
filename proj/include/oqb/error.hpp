#pragma once

#include <stdexcept>
#include <string>

namespace oqb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An evaluator returned NaN or an infinity.
class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Adaptive subdivision hit its depth limit before meeting the tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A kernel was evaluated outside [a, b].
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Unknown printed-formula identifier passed to the catalog.
class UnknownCase : public Error {
 public:
  using Error::Error;
};

/// The coefficient of F(x) vanishes, so the CDF identity cannot be solved for F.
class SingularCoefficient : public Error {
 public:
  using Error::Error;
};

}  // namespace oqb
