#pragma once

#include <stdexcept>
#include <string>

namespace cies {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid model parameters (non-positive scales, inverted ranges, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Argument outside the domain of a function.
struct DomainError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ExportError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct InfeasibleDecisionError : Error {
  using Error::Error;
};

}  // namespace cies
