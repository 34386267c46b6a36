#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

enum class ErrorCode {
  CriticalExponent,
  BadExponent,
  NonFinite,
  IntegrabilityViolation,
  QuadratureFailure,
  NotFound,
  OutOfDomain,
  BadMeshSpec,
  NonIntegrable,
  EmptyFunction,
  WrongExponent,
  BadEta,
  ScanExhausted,
  Config,
};

/// Process exit status for an error class: 1 for rejected input, 2 for
/// numerical failures.  Non-convergence is reported through result flags
/// (exit status 3), never thrown.
int exit_status(ErrorCode code);

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hardy
