#pragma once

#include <stdexcept>
#include <string>

namespace dshock {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// input-class errors, CLI exit code 2
struct InputError : Error {
  using Error::Error;
};
struct ValidationError : InputError {
  using InputError::InputError;
};
struct ParseError : InputError {
  using InputError::InputError;
};
struct WindowExcludesSingularity : InputError {
  using InputError::InputError;
};

// solver-class errors, CLI exit code 3
struct SolverError : Error {
  using Error::Error;
};
struct NonConvergence : SolverError {
  using SolverError::SolverError;
};
struct NoRoot : SolverError {
  using SolverError::SolverError;
};
struct QuadratureFailure : SolverError {
  using SolverError::SolverError;
};
struct NoConcentration : SolverError {
  using SolverError::SolverError;
};
struct CflViolation : SolverError {
  using SolverError::SolverError;
};

// i/o-class errors, CLI exit code 4
struct IoError : Error {
  using Error::Error;
};
struct DataError : IoError {
  using IoError::IoError;
};

inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const InputError*>(&e)) return 2;
  if (dynamic_cast<const SolverError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

}  // namespace dshock
