#pragma once

#include "hardy/core.hpp"

namespace hardy {

/// One-parameter boundary profile on (0, eta): h(t) = (2t/eta)^beta on the
/// inner half and the linear cap 2 - 2t/eta on the outer half, so h vanishes
/// at both ends and equals 1 at t = eta/2.
struct TrialProfile {
  double beta;
  double eta;
};

/// Validates beta > 1 - alpha - 1/p (IntegrabilityViolation) and eta > 0
/// (OutOfDomain).
TrialProfile make_trial_profile(const ProblemParams& params, double beta, double eta);

struct TrialConstants {
  double c_const;
  double d_const;
};

/// Integral of t^{alpha p} over (1, 2), in closed form.
double c_const(const ProblemParams& params);

/// Integral of (2 - t)^p t^{(alpha - 1) p} over (1, 2), by adaptive
/// quadrature to relative tolerance 1e-10.
double d_const(const ProblemParams& params);

TrialConstants trial_constants(const ProblemParams& params);

/// beta - (1 - alpha - 1/p); IntegrabilityViolation unless positive.
double integrability_margin(double beta, const ProblemParams& params);

/// Gradient energy of the canonical profile on (0, 2) with weight t^{alpha p}.
double trial_numerator(double beta, const ProblemParams& params);
/// Singular mass of the canonical profile on (0, 2) with weight t^{(alpha-1) p}.
double trial_denominator(double beta, const ProblemParams& params);
double trial_quotient(double beta, const ProblemParams& params);

/// Same integrals for the profile rescaled to (0, eta).
struct ProfileIntegrals {
  double grad_term;
  double mass_singular;
};
ProfileIntegrals trial_integrals(const TrialProfile& profile, const ProblemParams& params);

/// First beta on the sequence 1 - alpha - 1/p + 2^{-k}, k = 0, 1, ..., whose
/// quotient is at most Lambda + epsilon.  Throws NotFound once the offset no
/// longer changes beta in double precision.
double beta_for_epsilon(double epsilon, const ProblemParams& params);

double trial_profile_eval(const TrialProfile& profile, double t);
/// h'(t); at the junction t = eta/2 the one-sided derivative from the left.
double trial_profile_derivative(const TrialProfile& profile, double t);

}  // namespace hardy
