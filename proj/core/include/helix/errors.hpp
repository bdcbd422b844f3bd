#pragma once

#include <stdexcept>
#include <string>

namespace helix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument, configuration or precondition violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a grid (or a representation) do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A trace has non-negligible content where rotated samples leave the box.
class SupportViolation : public Error {
 public:
  using Error::Error;
};

/// The requested time step exceeds the advective stability limit.
class CflViolation : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf detected in the state, or a runtime invariant failed mid-run.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed binary snapshot or checkpoint.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace helix
