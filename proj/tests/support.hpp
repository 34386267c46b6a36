#pragma once

#include <hardy/assembly.hpp>
#include <hardy/core.hpp>
#include <hardy/geometry.hpp>
#include <hardy/mesh.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <variant>
#include <memory>
#include <random>
#include <vector>

namespace hardy::test {

// Seeded draws for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[std::size_t(integer(0, int(xs.size()) - 1))];
  }

  // (p, alpha) with alpha strictly inside the FEM range (-1/p, 1 - 1/p).
  ProblemParams params(const std::vector<double>& ps, double lambda = 0.0) {
    double p = pick(ps);
    double lo = -1.0 / p, hi = 1.0 - 1.0 / p;
    double a = uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
    return validate_params(p, a, lambda);
  }

  Domain domain() {
    switch (integer(0, 3)) {
      case 0: return Domain::interval(uniform(0.5, 3.0));
      case 1: return Domain::ball(2, uniform(0.5, 2.0));
      case 2: return Domain::ball(3, 1.0);
      default: return Domain::annulus(2, 1.0, uniform(1.5, 3.0));
    }
  }

  std::vector<double> values(const Assembler& a, double lo = -1.0, double hi = 1.0) {
    std::vector<double> u(a.n_nodes());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = a.constrained()[i] ? 0.0 : uniform(lo, hi);
    return u;
  }

 private:
  std::mt19937_64 rng_;
};

inline std::shared_ptr<const GradedMesh> mesh_ptr(const Domain& d, std::size_t n, double q) {
  return std::make_shared<const GradedMesh>(build_mesh(d, n, q));
}

// Tanh-sinh on [a, b]; copes with integrable endpoint singularities.
inline double ts_integral(const std::function<double(double)>& f, double a, double b) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  if (!(b > a)) return 0.0;
  // 0 * inf products at the very ends carry no mass
  auto g = [&](double x) {
    double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  return ts.integrate(g, a, b, 1e-13);
}

inline double gk_integral(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

inline double rel_err(double x, double ref) {
  return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
}

// Integral over a unit piece as two halves, each parametrised from its own
// end, so affine quantities stay exact near either endpoint.
// f(t, from_right) with t in (0, 1/2).
template <class F>
double ts_halves(F f) {
  return ts_integral([&](double t) { return f(t, false); }, 0, 0.5) +
         ts_integral([&](double t) { return f(t, true); }, 0, 0.5);
}

inline double lerp_end(double a, double b, double t, bool from_right) {
  return from_right ? b + (a - b) * t : a + (b - a) * t;
}

// Component integrals of a piecewise-linear function by direct quadrature,
// element by element and split at sign changes, the ridge and the tube edge.
inline QuotientComponents oracle_components(const ProblemParams& pr, const Domain& d,
                                            const GradedMesh& m, const std::vector<double>& u,
                                            double eta = INFINITY) {
  const double p = pr.p(), a = pr.alpha();
  const int dim = std::visit([](const auto& s) {
    if constexpr (requires { s.dim; }) return s.dim; else return 1;
  }, d.shape());
  const double omega = dim == 1 ? 1.0 : unit_sphere_measure(dim);
  QuotientComponents c;
  for (std::size_t e = 0; e + 1 < m.nodes.size(); ++e) {
    double x0 = m.nodes[e], x1 = m.nodes[e + 1];
    double u0 = u[e], u1 = u[e + 1];
    double s = (u1 - u0) / (x1 - x0);
    const double zero = u0 * u1 < 0 ? x0 - u0 / s : NAN;
    auto uval = [&](double x) {
      return x == x0 ? u0 : x == x1 ? u1 : x == zero ? 0.0 : u0 + s * (x - x0);
    };
    std::vector<double> cuts{x0};
    if (u0 * u1 < 0) cuts.push_back(zero);
    double ridge = d.ridge();
    if (ridge > x0 && ridge < x1) cuts.push_back(ridge);
    if (std::isfinite(eta))
      for (const auto& b : d.boundary_components()) {
        double r = b.position + b.orientation * eta;
        if (r > x0 && r < x1) cuts.push_back(r);
      }
    cuts.push_back(x1);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double lo = cuts[k], hi = cuts[k + 1], h = hi - lo;
      double da = d.delta(lo), db = d.delta(hi);
      double ua = uval(lo), ub = uval(hi);
      double mid_delta = d.delta(0.5 * (lo + hi));
      if (!(mid_delta < eta)) continue;
      auto piece = [&](double t, bool right, double wexp, double upow, bool grad) {
        double dl = lerp_end(da, db, t, right);
        double r = lerp_end(lo, hi, t, right);
        double w = std::pow(dl, wexp) * (dim == 1 ? 1.0 : omega * std::pow(r, dim - 1));
        double v = grad ? std::pow(std::abs(s), p) : std::pow(std::abs(lerp_end(ua, ub, t, right)), upow);
        return dl > 0 ? v * w * h : 0.0;
      };
      c.grad_term += ts_halves([&](double t, bool r) { return piece(t, r, a * p, p, true); });
      c.mass_alpha += ts_halves([&](double t, bool r) { return piece(t, r, a * p, p, false); });
      c.mass_singular += ts_halves([&](double t, bool r) { return piece(t, r, (a - 1) * p, p, false); });
    }
  }
  return c;
}

}  // namespace hardy::test
