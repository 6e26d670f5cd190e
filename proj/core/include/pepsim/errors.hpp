#pragma once

#include <stdexcept>
#include <string>

namespace pepsim {

// Error taxonomy mirrors the CLI exit-code contract:
//   ConfigError -> 2, DataError/ContractError -> 3, NumericalError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (bad field value, unknown key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Requested exposure would exceed the configured event cap.
class CapacityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Malformed or incompatible input data (files, spectra, streams).
class DataError : public Error {
 public:
  using Error::Error;
};

// A call-site contract was violated (unsorted stream, out-of-range channel).
class ContractError : public DataError {
 public:
  using DataError::DataError;
};

// A numerical routine failed to converge or left its valid domain.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pepsim
