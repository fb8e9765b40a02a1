#ifndef PARITYEST_ERRORS_HPP
#define PARITYEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parityest {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its admissible domain (non-finite, negative, ...).
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A likelihood table could not be built as requested.
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// Bayes update with an outcome of (numerically) zero probability.
class DegenerateUpdate : public Error {
public:
  using Error::Error;
};

/// Posterior order would exceed the coefficient cap with non-negligible energy.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// Point estimate requested from a posterior with zero sharpness.
class UndefinedSignal : public Error {
public:
  using Error::Error;
};

/// Brute-force oracle asked for an instance larger than it supports.
class OracleScaleError : public Error {
public:
  using Error::Error;
};

} // namespace parityest

#endif
