#include "hardy/trial.hpp"

#include <cmath>
#include <sstream>

#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

TrialProfile make_trial_profile(const ProblemParams& params, double beta, double eta) {
  integrability_margin(beta, params);
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::OutOfDomain, "trial profile scale eta must be positive");
  }
  return {beta, eta};
}

double c_const(const ProblemParams& params) {
  const double e = params.alpha() * params.p();
  if (e == -1.0) return std::log(2.0);
  return (std::pow(2.0, e + 1.0) - 1.0) / (e + 1.0);
}

double d_const(const ProblemParams& params) {
  const double p = params.p();
  const double e = (params.alpha() - 1.0) * p;
  const auto integrand = [p, e](double t) { return std::pow(2.0 - t, p) * std::pow(t, e); };
  return integrate_adaptive(integrand, 1.0, 2.0, 1e-10).value;
}

TrialConstants trial_constants(const ProblemParams& params) {
  return {c_const(params), d_const(params)};
}

double integrability_margin(double beta, const ProblemParams& params) {
  const double s = beta - params.subcritical_gap();
  if (!(s > 0.0)) {
    std::ostringstream msg;
    msg << "beta = " << beta << " must exceed 1 - alpha - 1/p = "
        << params.subcritical_gap();
    throw Error(ErrorCode::IntegrabilityViolation, msg.str());
  }
  return s;
}

namespace {

double numerator_with(double beta, double s, double c, const ProblemParams& params) {
  const double p = params.p();
  return std::pow(beta, p) / (p * s) + c;
}

double denominator_with(double s, double d, const ProblemParams& params) {
  return 1.0 / (params.p() * s) + d;
}

}  // namespace

double trial_numerator(double beta, const ProblemParams& params) {
  const double s = integrability_margin(beta, params);
  return numerator_with(beta, s, c_const(params), params);
}

double trial_denominator(double beta, const ProblemParams& params) {
  const double s = integrability_margin(beta, params);
  return denominator_with(s, d_const(params), params);
}

double trial_quotient(double beta, const ProblemParams& params) {
  const double s = integrability_margin(beta, params);
  const TrialConstants k = trial_constants(params);
  return numerator_with(beta, s, k.c_const, params) / denominator_with(s, k.d_const, params);
}

ProfileIntegrals trial_integrals(const TrialProfile& profile, const ProblemParams& params) {
  const double p = params.p();
  const double a = params.alpha();
  // t = (eta/2) tau maps the canonical profile on (0, 2) onto (0, eta)
  const double scale = 0.5 * profile.eta;
  const double grad = trial_numerator(profile.beta, params) *
                      std::pow(scale, a * p + 1.0 - p);
  const double mass = trial_denominator(profile.beta, params) *
                      std::pow(scale, (a - 1.0) * p + 1.0);
  return {grad, mass};
}

double beta_for_epsilon(double epsilon, const ProblemParams& params) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::NotFound, "epsilon must be positive");
  }
  const double target = sharp_constant(params).value + epsilon;
  const double critical = params.subcritical_gap();
  const TrialConstants k = trial_constants(params);
  for (double s = 1.0; s > 0.0; s *= 0.5) {
    const double beta = critical + s;
    if (!(beta > critical)) break;
    const double margin = beta - critical;
    const double q = numerator_with(beta, margin, k.c_const, params) /
                     denominator_with(margin, k.d_const, params);
    if (q <= target) return beta;
  }
  std::ostringstream msg;
  msg << "no trial exponent reaches Lambda + " << epsilon
      << " before the offset underflows";
  throw Error(ErrorCode::NotFound, msg.str());
}

double trial_profile_eval(const TrialProfile& profile, double t) {
  if (!(t >= 0.0 && t <= profile.eta)) {
    throw Error(ErrorCode::OutOfDomain, "trial profile evaluated outside [0, eta]");
  }
  const double tau = 2.0 * t / profile.eta;
  if (tau < 1.0) return std::pow(tau, profile.beta);
  return 2.0 - tau;
}

double trial_profile_derivative(const TrialProfile& profile, double t) {
  if (!(t >= 0.0 && t <= profile.eta)) {
    throw Error(ErrorCode::OutOfDomain, "trial profile evaluated outside [0, eta]");
  }
  const double tau = 2.0 * t / profile.eta;
  const double chain = 2.0 / profile.eta;
  if (tau <= 1.0) return chain * profile.beta * std::pow(tau, profile.beta - 1.0);
  return -chain;
}

}  // namespace hardy
