#include "hardy/core.hpp"

#include <cmath>
#include <sstream>

#include "hardy/error.hpp"

namespace hardy {

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::CriticalExponent:
    case ErrorCode::BadExponent:
    case ErrorCode::NonFinite:
    case ErrorCode::IntegrabilityViolation:
    case ErrorCode::OutOfDomain:
    case ErrorCode::BadMeshSpec:
    case ErrorCode::NonIntegrable:
    case ErrorCode::WrongExponent:
    case ErrorCode::BadEta:
    case ErrorCode::Config:
      return 1;
    case ErrorCode::QuadratureFailure:
    case ErrorCode::NotFound:
    case ErrorCode::EmptyFunction:
    case ErrorCode::ScanExhausted:
      return 2;
  }
  return 2;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CriticalExponent: return "CriticalExponent";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IntegrabilityViolation: return "IntegrabilityViolation";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BadMeshSpec: return "BadMeshSpec";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::EmptyFunction: return "EmptyFunction";
    case ErrorCode::WrongExponent: return "WrongExponent";
    case ErrorCode::BadEta: return "BadEta";
    case ErrorCode::ScanExhausted: return "ScanExhausted";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

ProblemParams validate_params(double p, double alpha, double lambda) {
  if (!std::isfinite(p) || !std::isfinite(alpha) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::NonFinite, "p, alpha and lambda must be finite");
  }
  if (!(p > 1.0)) {
    std::ostringstream msg;
    msg << "exponent p must exceed 1, got " << p;
    throw Error(ErrorCode::BadExponent, msg.str());
  }
  if (!(alpha < 1.0 - 1.0 / p)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is not below 1 - 1/p = " << 1.0 - 1.0 / p
        << " (critical range)";
    throw Error(ErrorCode::CriticalExponent, msg.str());
  }
  return ProblemParams(p, alpha, lambda);
}

ProblemParams ProblemParams::with_lambda(double lambda) const {
  return validate_params(p_, alpha_, lambda);
}

double ProblemParams::subcritical_gap() const { return (1.0 - 1.0 / p_) - alpha_; }

SharpConstant sharp_constant(const ProblemParams& params) {
  const double gap = params.subcritical_gap();
  // log form near criticality, where the base is tiny
  if (gap < 1e-8) return {std::exp(params.p() * std::log(gap))};
  return {std::pow(gap, params.p())};
}

}  // namespace hardy
