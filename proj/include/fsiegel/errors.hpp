#pragma once

#include <stdexcept>
#include <string>

namespace fsiegel {

/// Invalid argument to a mathematical operation (non-prime q, zero divisor, bad witness input).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-conforming matrix or vector dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A subspace that fails to be n-dimensional or omega-isotropic.
class NotLagrangianError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// An enumeration would exceed its configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked mathematical statement turned out false.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent computations of the same quantity disagree.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fsiegel
