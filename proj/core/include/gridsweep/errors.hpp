#pragma once

#include <stdexcept>
#include <string>

namespace gridsweep {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller passed a value outside an operation's domain.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// The run configuration is inconsistent (unknown variable, missing role, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An input file does not have the required shape (missing column, no header).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// An input file has the right shape but bad contents (duplicate key, parse failure).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A value violates a domain invariant (e.g. non-binary value in a binary column).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Base class for model-fit failures. These are recoverable within a sweep:
/// each failed fit becomes a result row carrying an error code.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Design matrix has no rows after listwise deletion, or too few to fit.
class EmptyDesignError : public FitError {
 public:
  using FitError::FitError;
};

/// Response is all zeros or all ones; the likelihood has no interior optimum.
class DegenerateResponseError : public FitError {
 public:
  using FitError::FitError;
};

/// Design matrix is rank deficient. `column()` names a column involved in the
/// linear dependence when one could be identified.
class SingularDesignError : public FitError {
 public:
  SingularDesignError(const std::string& what, std::string column)
      : FitError(what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

/// A coefficient diverged during iteration, indicating (quasi-)complete
/// separation of the response by the covariates.
class SeparationError : public FitError {
 public:
  using FitError::FitError;
};

}  // namespace gridsweep
