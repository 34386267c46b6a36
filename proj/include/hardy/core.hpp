#pragma once

namespace hardy {

/// Exponent p, weight exponent alpha and spectral shift lambda of the
/// weighted Hardy quotient.  Only obtainable through validate_params, so a
/// held value always satisfies p > 1 and alpha < 1 - 1/p.
class ProblemParams {
 public:
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }

  /// Same (p, alpha) with a different shift; the shift never affects
  /// admissibility.
  ProblemParams with_lambda(double lambda) const;

  /// 1 - alpha - 1/p, strictly positive.
  double subcritical_gap() const;

 private:
  friend ProblemParams validate_params(double p, double alpha, double lambda);
  ProblemParams(double p, double alpha, double lambda)
      : p_(p), alpha_(alpha), lambda_(lambda) {}

  double p_;
  double alpha_;
  double lambda_;
};

struct SharpConstant {
  double value;
};

/// Throws Error{NonFinite | BadExponent | CriticalExponent}.  The critical
/// boundary alpha = 1 - 1/p is rejected with no slack.
ProblemParams validate_params(double p, double alpha, double lambda);

/// (1 - alpha - 1/p)^p.
SharpConstant sharp_constant(const ProblemParams& params);

}  // namespace hardy
