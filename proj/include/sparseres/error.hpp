#pragma once

#include <stdexcept>
#include <string>

namespace sparseres {

/// Base of every error raised by the library. The CLI maps the three
/// subclasses below onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (files, dimensions, zero polynomials).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Exact construction failed: non-generic lifting or shift, missing
/// Sylvester-type matrix, definition/support mismatch.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A lifting or perturbation vector hit a degenerate configuration.
/// Callers redraw and retry.
class NonGenericError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

/// Floating-point stage failed (singular factorization, eigen solver).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparseres
