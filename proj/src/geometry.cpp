#include "hardy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << value;
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
}

void require_dim(int dim) {
  if (dim < 1) throw Error(ErrorCode::OutOfDomain, "dimension N must be >= 1");
}

}  // namespace

double unit_sphere_measure(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

Domain Domain::interval(double length) {
  require_positive(length, "interval length L");
  return Domain(Interval{length});
}

Domain Domain::ball(int dim, double radius) {
  require_dim(dim);
  require_positive(radius, "ball radius R");
  return Domain(Ball{dim, radius});
}

Domain Domain::annulus(int dim, double inner, double outer) {
  require_dim(dim);
  require_positive(inner, "inner radius R0");
  require_positive(outer, "outer radius R1");
  if (!(inner < outer)) throw Error(ErrorCode::OutOfDomain, "annulus needs R0 < R1");
  return Domain(Annulus{dim, inner, outer});
}

std::string Domain::kind() const {
  return std::visit(overloaded{[](const Interval&) { return std::string("interval"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const Annulus&) { return std::string("annulus"); }},
                    shape_);
}

double Domain::lo() const {
  return std::visit(overloaded{[](const Interval&) { return 0.0; },
                               [](const Ball&) { return 0.0; },
                               [](const Annulus& a) { return a.inner; }},
                    shape_);
}

double Domain::hi() const {
  return std::visit(overloaded{[](const Interval& i) { return i.length; },
                               [](const Ball& b) { return b.radius; },
                               [](const Annulus& a) { return a.outer; }},
                    shape_);
}

double Domain::sup_delta() const {
  return std::visit(overloaded{[](const Interval& i) { return 0.5 * i.length; },
                               [](const Ball& b) { return b.radius; },
                               [](const Annulus& a) { return 0.5 * (a.outer - a.inner); }},
                    shape_);
}

double Domain::eta_max() const { return sup_delta(); }

double Domain::length_scale() const {
  return std::visit(overloaded{[](const Interval& i) { return i.length; },
                               [](const Ball& b) { return b.radius; },
                               [](const Annulus& a) { return a.outer - a.inner; }},
                    shape_);
}

double Domain::delta(double r) const {
  if (!(r >= lo() && r <= hi())) {
    std::ostringstream msg;
    msg << "coordinate " << r << " outside [" << lo() << ", " << hi() << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  return std::visit(
      overloaded{[r](const Interval& i) { return std::min(r, i.length - r); },
                 [r](const Ball& b) { return b.radius - r; },
                 [r](const Annulus& a) { return std::min(r - a.inner, a.outer - r); }},
      shape_);
}

double Domain::radial_measure(double r) const {
  if (!(r >= lo() && r <= hi())) {
    throw Error(ErrorCode::OutOfDomain, "radial measure evaluated outside the domain");
  }
  return std::visit(
      overloaded{[](const Interval&) { return 1.0; },
                 [r](const Ball& b) {
                   return unit_sphere_measure(b.dim) * std::pow(r, b.dim - 1);
                 },
                 [r](const Annulus& a) {
                   return unit_sphere_measure(a.dim) * std::pow(r, a.dim - 1);
                 }},
      shape_);
}

double Domain::boundary_measure() const {
  double total = 0.0;
  for (const auto& c : boundary_components()) total += c.measure;
  return total;
}

double Domain::ridge() const {
  return std::visit(overloaded{[](const Interval& i) { return 0.5 * i.length; },
                               [](const Ball&) { return 0.0; },
                               [](const Annulus& a) { return 0.5 * (a.inner + a.outer); }},
                    shape_);
}

bool Domain::has_free_center() const { return std::holds_alternative<Ball>(shape_); }

double Domain::jac_const(double eta) const {
  return std::visit(
      overloaded{[](const Interval&) { return 0.0; },
                 [](const Ball& b) { return (b.dim - 1) / b.radius; },
                 [eta](const Annulus& a) {
                   const double outer = (a.dim - 1) / a.outer;
                   // (1 + t/R0)^{N-1} - 1 is convex, so its secant over (0, eta) bounds it
                   const double inner =
                       (std::pow(1.0 + eta / a.inner, a.dim - 1) - 1.0) / eta;
                   return std::max(inner, outer);
                 }},
      shape_);
}

std::vector<Domain::BoundaryComponent> Domain::boundary_components() const {
  return std::visit(
      overloaded{[](const Interval& i) {
                   return std::vector<BoundaryComponent>{{0.0, 1.0, 1.0},
                                                         {i.length, -1.0, 1.0}};
                 },
                 [](const Ball& b) {
                   const double w = unit_sphere_measure(b.dim);
                   return std::vector<BoundaryComponent>{
                       {b.radius, -1.0, w * std::pow(b.radius, b.dim - 1)}};
                 },
                 [](const Annulus& a) {
                   const double w = unit_sphere_measure(a.dim);
                   return std::vector<BoundaryComponent>{
                       {a.inner, 1.0, w * std::pow(a.inner, a.dim - 1)},
                       {a.outer, -1.0, w * std::pow(a.outer, a.dim - 1)}};
                 }},
      shape_);
}

TubularData tubular_data(const Domain& domain, double eta) {
  if (!(eta > 0.0 && eta < domain.eta_max())) {
    std::ostringstream msg;
    msg << "tubular width eta = " << eta << " must lie in (0, " << domain.eta_max() << ")";
    throw Error(ErrorCode::BadEta, msg.str());
  }
  return {eta, domain.jac_const(eta)};
}

namespace {

int dimension_of(const Domain& domain) {
  return std::visit(overloaded{[](const Interval&) { return 1; },
                               [](const Ball& b) { return b.dim; },
                               [](const Annulus& a) { return a.dim; }},
                    domain.shape());
}

// Jacobian of the map from a boundary component to the parallel surface at
// distance t.
double parallel_jacobian(const Domain& domain, const Domain::BoundaryComponent& c, double t) {
  if (std::holds_alternative<Interval>(domain.shape())) return 1.0;
  const double r = c.position + c.orientation * t;
  return std::pow(r / c.position, dimension_of(domain) - 1);
}

}  // namespace

CoareaCheck coarea_bounds_check(const Domain& domain, double eta,
                                const std::function<double(double)>& v) {
  if (!(eta > 0.0 && eta <= 0.5 * domain.eta_max())) {
    throw Error(ErrorCode::BadEta, "coarea check needs 0 < eta <= eta_max / 2");
  }
  const double c = domain.jac_const(eta);
  const auto abs_v = [&v](double r) { return std::abs(v(r)); };

  CoareaCheck out{};
  double middle = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  for (const auto& comp : domain.boundary_components()) {
    // volume route: integrate over the coordinate band of the collar
    const double r0 = comp.position;
    const double r1 = comp.position + comp.orientation * eta;
    const double a = std::min(r0, r1);
    const double b = std::max(r0, r1);
    middle += integrate_adaptive(
                  [&](double r) { return abs_v(r) * domain.radial_measure(r); }, a, b, 1e-12)
                  .value;
    const auto along = [&](double t) { return abs_v(comp.position + comp.orientation * t); };
    lower += comp.measure *
             integrate_adaptive([&](double t) { return (1.0 - c * t) * along(t); }, 0.0, eta,
                                1e-12)
                 .value;
    upper += comp.measure *
             integrate_adaptive([&](double t) { return (1.0 + c * t) * along(t); }, 0.0, eta,
                                1e-12)
                 .value;
  }
  out.lower = lower;
  out.middle = middle;
  out.upper = upper;
  const double slack = 1e-8 * std::max({std::abs(lower), std::abs(middle), std::abs(upper)});
  out.lower_ok = lower <= middle + slack;
  out.upper_ok = middle <= upper + slack;
  return out;
}

TrialLift::TrialLift(const Domain& domain, const ProblemParams& params, double beta,
                     double eta)
    : domain_(domain), profile_(make_trial_profile(params, beta, eta)) {
  if (eta > domain.eta_max()) {
    throw Error(ErrorCode::BadEta, "trial lift width exceeds eta_max");
  }
}

double TrialLift::operator()(double r) const {
  const double d = domain_.delta(r);
  if (d >= profile_.eta) return 0.0;
  return trial_profile_eval(profile_, d);
}

double TrialLift::derivative(double r) const {
  const double d = domain_.delta(r);
  if (d >= profile_.eta) return 0.0;
  // orientation of the nearest boundary component gives d(delta)/dr
  double orientation = 1.0;
  double best = INFINITY;
  for (const auto& c : domain_.boundary_components()) {
    const double dist = std::abs(r - c.position);
    if (dist < best) {
      best = dist;
      orientation = c.orientation;
    }
  }
  return orientation * trial_profile_derivative(profile_, d);
}

LiftIntegrals lift_integrals(const TrialLift& lift, const Domain& domain,
                             const ProblemParams& params) {
  const double p = params.p();
  const double a_grad = params.alpha() * p;
  const double a_sing = (params.alpha() - 1.0) * p;
  const TrialProfile& prof = lift.profile();
  const double eta = prof.eta;
  const double beta = prof.beta;
  const double half = 0.5 * eta;
  const std::size_t n = 32;

  LiftIntegrals out{0.0, 0.0, 0.0};
  for (const auto& comp : domain.boundary_components()) {
    const auto jac = [&](double t) { return comp.measure * parallel_jacobian(domain, comp, t); };

    // inner half: h = (t/half)^beta, every integrand is a pure power of t
    // times the Jacobian; t = (half/2)(1 + s)
    {
      const double hw = 0.5 * half;
      const auto inner = [&](double power, double coef) {
        const GaussRule& rule = cached_gauss_jacobi(n, 0.0, power);
        double sum = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
          const double t = hw * (1.0 + rule.nodes[q]);
          sum += rule.weights[q] * jac(t);
        }
        return coef * hw * std::pow(hw, power) * sum;
      };
      const double inv = 1.0 / half;
      const double grad_coef = std::pow(beta * inv, p) * std::pow(inv, (beta - 1.0) * p);
      const double mass_coef = std::pow(inv, beta * p);
      out.grad_term += inner((beta - 1.0) * p + a_grad, grad_coef);
      out.mass_alpha += inner(beta * p + a_grad, mass_coef);
      out.mass_singular += inner(beta * p + a_sing, mass_coef);
    }
    // outer half: h = 2 - t/half vanishes linearly at t = eta;
    // t = half + (half/2)(1 + s), so h = (1 - s)/2
    {
      const double hw = 0.5 * half;
      const GaussRule& smooth = cached_gauss_jacobi(n, 0.0, 0.0);
      const GaussRule& capped = cached_gauss_jacobi(n, p, 0.0);
      double g = 0.0;
      double ma = 0.0;
      double ms = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const double t = half + hw * (1.0 + smooth.nodes[q]);
        g += smooth.weights[q] * std::pow(t, a_grad) * jac(t);
        const double tc = half + hw * (1.0 + capped.nodes[q]);
        ma += capped.weights[q] * std::pow(tc, a_grad) * jac(tc);
        ms += capped.weights[q] * std::pow(tc, a_sing) * jac(tc);
      }
      out.grad_term += hw * std::pow(1.0 / half, p) * g;
      out.mass_alpha += hw * std::pow(0.5, p) * ma;
      out.mass_singular += hw * std::pow(0.5, p) * ms;
    }
  }
  return out;
}

double lift_quotient_bound(const TrialLift& lift, const Domain& domain,
                           const ProblemParams& params) {
  const double eta = lift.eta();
  const double c = domain.jac_const(eta);
  if (!(c * eta < 1.0)) {
    throw Error(ErrorCode::BadEta, "tube bound needs c * eta < 1");
  }
  const double q = trial_quotient(lift.profile().beta, params);
  return (1.0 + c * eta) / (1.0 - c * eta) * q +
         std::abs(params.lambda()) * std::pow(eta, params.p());
}

}  // namespace hardy
