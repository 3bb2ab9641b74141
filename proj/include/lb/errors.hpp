#pragma once

#include <stdexcept>
#include <string>

namespace lb {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point lies outside (or on the boundary of) the open domain box.
struct DomainError : Error {
  using Error::Error;
};

// A finite-difference stencil would leave the domain.
struct StencilError : Error {
  using Error::Error;
};

// Hessian failed the strict positive-definiteness gate.
struct ConvexityError : Error {
  using Error::Error;
};

// Iterative solve did not reach tolerance, or the requested dual point
// lies outside the image of the gradient map.
struct NonConvergenceError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

// Truncated power series of different orders were combined.
struct OrderMismatchError : Error {
  using Error::Error;
};

// Series exp/log/recip called with an inadmissible constant term.
struct InvalidLeadingCoefficientError : Error {
  using Error::Error;
};

// State vector handed to the geometric-tensor routine is not normalized.
struct NormalizationError : Error {
  using Error::Error;
};

// Malformed descriptor input.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace lb
