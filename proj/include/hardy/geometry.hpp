#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hardy/core.hpp"
#include "hardy/trial.hpp"

namespace hardy {

struct Interval {
  double length;
};

struct Ball {
  int dim;
  double radius;
};

struct Annulus {
  int dim;
  double inner;
  double outer;
};

/// A domain whose distance to the boundary is known in closed form.  All
/// positions are one-dimensional: the coordinate along (0, L) for an
/// interval, the radius for ball and annulus.
class Domain {
 public:
  using Shape = std::variant<Interval, Ball, Annulus>;

  /// Throws Error{OutOfDomain} on non-positive sizes, dim < 1, inner >= outer.
  static Domain interval(double length);
  static Domain ball(int dim, double radius);
  static Domain annulus(int dim, double inner, double outer);

  const Shape& shape() const { return shape_; }
  std::string kind() const;

  /// Radial (or 1D) coordinate range [lo, hi].
  double lo() const;
  double hi() const;

  /// M, the supremum of the distance function.
  double sup_delta() const;
  /// Largest admissible tubular width.
  double eta_max() const;
  /// Length scale used for mesh floors: L, R, or R1 - R0.
  double length_scale() const;

  /// Distance to the boundary at coordinate r; OutOfDomain outside [lo, hi].
  double delta(double r) const;
  /// Volume density in the coordinate: omega_N r^{N-1}, or 1 for an interval.
  double radial_measure(double r) const;
  /// Surface measure of the boundary.
  double boundary_measure() const;
  /// Coordinate of the interior ridge of delta (interval midpoint, annulus
  /// mid-radius) or the ball center.
  double ridge() const;
  /// True when the ridge end (r = lo for a ball) carries no boundary condition.
  bool has_free_center() const;

  /// Constant c with |Jac(t) - 1| <= c t for t in (0, eta), where Jac is
  /// the exact radial Jacobian of the parallel surfaces.
  double jac_const(double eta) const;

  /// Component pieces of the boundary: (surface measure, orientation), where
  /// the coordinate at distance t is r = position + orientation * t.
  struct BoundaryComponent {
    double position;
    double orientation;
    double measure;
  };
  std::vector<BoundaryComponent> boundary_components() const;

 private:
  explicit Domain(Shape shape) : shape_(shape) {}
  Shape shape_;
};

/// Surface measure of the unit (N-1)-sphere, 2 pi^{N/2} / Gamma(N/2).
double unit_sphere_measure(int dim);

struct TubularData {
  double eta;
  double jac_const;
};

/// eta must lie in (0, eta_max); throws BadEta otherwise.
TubularData tubular_data(const Domain& domain, double eta);

struct CoareaCheck {
  double lower;   // int_0^eta (1 - c t) dt int_boundary |v|
  double middle;  // int_{Omega_eta} |v| dx
  double upper;   // int_0^eta (1 + c t) dt int_boundary |v|
  bool lower_ok;
  bool upper_ok;
};

/// Evaluates the tubular coarea sandwich for a radial function v (given as
/// a function of the coordinate r) by adaptive quadrature.  Requires
/// eta <= eta_max / 2.
CoareaCheck coarea_bounds_check(const Domain& domain, double eta,
                                const std::function<double(double)>& v);

/// u(x) = h(delta(x)) inside the tube delta < eta and zero elsewhere.
class TrialLift {
 public:
  /// The profile is rescaled to live on (0, eta).
  TrialLift(const Domain& domain, const ProblemParams& params, double beta, double eta);

  double operator()(double r) const;
  /// du/dr.
  double derivative(double r) const;

  const TrialProfile& profile() const { return profile_; }
  double eta() const { return profile_.eta; }

 private:
  Domain domain_;
  TrialProfile profile_;
};

/// The three weighted integrals of the exact (not interpolated) lift,
/// integrated in the tube coordinate with Jacobi rules that absorb the
/// power singularity at the boundary.
struct LiftIntegrals {
  double grad_term;
  double mass_alpha;
  double mass_singular;
};
LiftIntegrals lift_integrals(const TrialLift& lift, const Domain& domain,
                             const ProblemParams& params);

/// Right-hand side of the tube upper bound for the lifted quotient:
/// (1 + c eta)/(1 - c eta) (Lambda + epsilon) + |lambda| eta^p, with
/// epsilon = trial_quotient(beta) - Lambda.
double lift_quotient_bound(const TrialLift& lift, const Domain& domain,
                           const ProblemParams& params);

}  // namespace hardy
