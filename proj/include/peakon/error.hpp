#pragma once

#include <stdexcept>
#include <string>

namespace peakon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid or array layout violates a structural invariant (ordering, sizes, peak node).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or out-of-range input values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point lies outside the sampled support.
class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

/// Linearized data with a nonzero value at the peak; the flow leaves the
/// continuous class immediately (jump-generation lemma).
class JumpGenerationError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Output directory or file could not be written.
class OutputError : public Error {
 public:
  using Error::Error;
};

/// A time integrator produced a non-finite state.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace peakon
