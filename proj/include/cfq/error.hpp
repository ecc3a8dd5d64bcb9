#pragma once

#include <stdexcept>
#include <string>

namespace cfq {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (unknown ids, bad tables, bad flags).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A strategy rule reads an event that does not causally precede its setting.
class CausalViolation : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an event of zero probability.
class NullConditioning : public Error {
 public:
  using Error::Error;
};

/// Query is structurally invalid against its scenario.
class QueryError : public Error {
 public:
  using Error::Error;
};

/// An operator failed a physical validity check (Hermiticity, positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Unnormalized-state trace fell below the representable range.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

/// A record has zero density under the ostensible measure.
class OstensibleSupportError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the regime a closed form assumes.
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

/// Every weight in an ensemble is zero.
class DegenerateEnsemble : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfq
