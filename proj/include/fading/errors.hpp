#pragma once

#include <stdexcept>
#include <string>

namespace fading {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was broken (non-unit direction, non-Hermitian input).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid or non-stationary process model, including malformed model files.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The process is not regular: a prediction error vanishes or a spectral
/// density is not strictly positive.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// A (block) Toeplitz covariance is not positive definite.
class IllPosedCovarianceError : public Error {
 public:
  using Error::Error;
};

/// Nonparametric estimation broke down (degenerate neighbour distances).
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Directional spread of a supposedly isotropic law is too large.
class IsotropyViolation : public Error {
 public:
  using Error::Error;
};

/// Quadrature or iterative solver did not reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace fading
