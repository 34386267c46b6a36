#include "hardy/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardy/error.hpp"
#include "hardy/parallel.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

constexpr std::size_t kRule = 16;

double at(double a, double b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return a + (b - a) * t;
}

double signed_power(double x, double e) {
  // |x|^e sign(x)
  if (x == 0.0) return 0.0;
  const double m = std::pow(std::abs(x), e);
  return x > 0 ? m : -m;
}

}  // namespace

namespace {

// larger over smaller end value; infinite when one end vanishes
double end_ratio(double a, double b) {
  const double l = std::abs(a);
  const double r = std::abs(b);
  return std::max(l, r) / std::min(l, r);
}

constexpr double kSmoothRatio = 2.0;

double affine_product(double length, const std::vector<AffineFactor>& factors, int depth) {
  double a = 0.0;
  double b = 0.0;
  double scale = 0.5 * length;
  AffineFactor smooth[16];
  std::size_t n_smooth = 0;
  bool steep = false;
  for (const auto& f : factors) {
    if (f.exponent == 0.0) continue;
    const double l = std::abs(f.left);
    const double r = std::abs(f.right);
    if (l == 0.0 && r == 0.0) {
      if (f.exponent > 0.0) return 0.0;
      throw Error(ErrorCode::NonIntegrable, "negative power of a factor vanishing on an interval");
    }
    if (l == 0.0) {
      b += f.exponent;
      scale *= std::pow(0.5 * r, f.exponent);
    } else if (r == 0.0) {
      a += f.exponent;
      scale *= std::pow(0.5 * l, f.exponent);
    } else {
      if (n_smooth == 16) throw Error(ErrorCode::QuadratureFailure, "too many factors");
      smooth[n_smooth++] = {l, r, f.exponent};
      // integer powers are polynomials, sampled exactly at any ratio
      const bool poly = f.exponent > 0.0 && f.exponent == std::floor(f.exponent);
      if (!poly && end_ratio(l, r) > kSmoothRatio) steep = true;
    }
  }
  if (steep && depth < 64) {
    std::vector<AffineFactor> left, right;
    left.reserve(factors.size());
    right.reserve(factors.size());
    for (const auto& f : factors) {
      const double mid = 0.5 * (f.left + f.right);
      left.push_back({f.left, mid, f.exponent});
      right.push_back({mid, f.right, f.exponent});
    }
    return affine_product(0.5 * length, left, depth + 1) +
           affine_product(0.5 * length, right, depth + 1);
  }
  const GaussRule& rule = cached_gauss_jacobi(kRule, a, b);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = rule.nodes[q];
    double v = rule.weights[q];
    for (std::size_t k = 0; k < n_smooth; ++k) {
      const auto& f = smooth[k];
      v *= std::pow(0.5 * (f.left * (1.0 - s) + f.right * (1.0 + s)), f.exponent);
    }
    sum += v;
  }
  return scale * sum;
}

}  // namespace

double integrate_affine_product(double length, const std::vector<AffineFactor>& factors) {
  return affine_product(length, factors, 0);
}

double chi(const ProblemParams& params, const QuotientComponents& c) {
  if (!(c.mass_singular > 0.0)) {
    throw Error(ErrorCode::EmptyFunction, "singular mass vanishes; u is identically zero");
  }
  return (c.grad_term - params.lambda() * c.mass_alpha) / c.mass_singular;
}

Assembler::Assembler(const ProblemParams& params, const Domain& domain,
                     std::shared_ptr<const GradedMesh> mesh, int threads)
    : params_(params), domain_(domain), mesh_(std::move(mesh)), threads_(threads) {
  const double p = params_.p();
  const double alpha = params_.alpha();
  if (!(alpha * p > -1.0)) {
    std::ostringstream msg;
    msg << "piecewise-linear functions need alpha > -1/p (alpha = " << alpha << ", p = " << p
        << ")";
    throw Error(ErrorCode::NonIntegrable, msg.str());
  }
  integer_p_ = p == std::floor(p);
  pinned_ = constrained_nodes(domain_, *mesh_);
  const auto& x = mesh_->nodes;
  if (!domain_.has_free_center() && !std::binary_search(x.begin(), x.end(), domain_.ridge())) {
    throw Error(ErrorCode::BadMeshSpec, "mesh must contain the ridge of the distance function");
  }
  const std::size_t nn = x.size();
  first_free_ = 0;
  while (first_free_ < nn && pinned_[first_free_]) ++first_free_;
  std::size_t last = first_free_;
  while (last < nn && !pinned_[last]) ++last;
  n_free_ = last - first_free_;
  for (std::size_t i = last; i < nn; ++i) {
    if (!pinned_[i]) throw Error(ErrorCode::BadMeshSpec, "free nodes must be contiguous");
  }
  if (n_free_ == 0) throw Error(ErrorCode::BadMeshSpec, "mesh has no free nodes");

  if (const auto* ball = std::get_if<Ball>(&domain_.shape())) {
    radial_exponent_ = ball->dim - 1;
    radial_const_ = unit_sphere_measure(ball->dim);
  } else if (const auto* ann = std::get_if<Annulus>(&domain_.shape())) {
    radial_exponent_ = ann->dim - 1;
    radial_const_ = unit_sphere_measure(ann->dim);
  }

  const std::size_t ne = mesh_->n_elements();
  elements_.resize(ne);
  wg_.assign(ne, 0.0);
  kalpha_.assign(ne, 0.0);
  ksing_.assign(ne, 0.0);
  walpha_.assign(ne, {});
  wsing_.assign(ne, {});

  const GaussRule& legendre = cached_gauss_jacobi(kRule, 0.0, 0.0);
  for (std::size_t q = 0; q < kPoints; ++q) phi1_[q] = 0.5 * (1.0 + legendre.nodes[q]);

  const double ea = alpha * p;
  const double es = (alpha - 1.0) * p;
  const double rad = radial_exponent_;
  const double omega = radial_const_;
  parallel_for(ne, threads_, [&](std::size_t e) {
    Element E{x[e], x[e + 1], x[e + 1] - x[e], domain_.delta(x[e]), domain_.delta(x[e + 1]),
              x[e], x[e + 1], -1, false};
    if (E.d0 == 0.0 && E.d1 == 0.0) {
      throw Error(ErrorCode::BadMeshSpec, "element touches the boundary at both ends");
    }
    if (E.d0 == 0.0) E.boundary_end = 0;
    if (E.d1 == 0.0) E.boundary_end = 1;
    E.tabulated = E.boundary_end < 0 && end_ratio(E.d0, E.d1) <= kSmoothRatio;
    elements_[e] = E;
    wg_[e] = omega * integrate_affine_product(E.h, {{E.d0, E.d1, ea}, {E.r0, E.r1, rad}});
    if (E.boundary_end >= 0) {
      const AffineFactor phi = E.boundary_end == 0 ? AffineFactor{0.0, 1.0, p}
                                                   : AffineFactor{1.0, 0.0, p};
      kalpha_[e] =
          omega * integrate_affine_product(E.h, {phi, {E.d0, E.d1, ea}, {E.r0, E.r1, rad}});
      ksing_[e] =
          omega * integrate_affine_product(E.h, {phi, {E.d0, E.d1, es}, {E.r0, E.r1, rad}});
    } else if (E.tabulated) {
      for (std::size_t q = 0; q < kPoints; ++q) {
        const double t = phi1_[q];
        const double d = E.d0 + (E.d1 - E.d0) * t;
        const double r = E.r0 + (E.r1 - E.r0) * t;
        const double base = legendre.weights[q] * 0.5 * E.h * omega * std::pow(r, rad);
        walpha_[e][q] = base * std::pow(d, ea);
        wsing_[e][q] = base * std::pow(d, es);
      }
    }
  });
  lumped_sing_.assign(nn, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    const Element& E = elements_[e];
    if (E.boundary_end == 0) {
      lumped_sing_[e + 1] += ksing_[e];
    } else if (E.boundary_end == 1) {
      lumped_sing_[e] += ksing_[e];
    } else if (E.tabulated) {
      for (std::size_t q = 0; q < kPoints; ++q) {
        lumped_sing_[e] += wsing_[e][q] * std::pow(1.0 - phi1_[q], p);
        lumped_sing_[e + 1] += wsing_[e][q] * std::pow(phi1_[q], p);
      }
    } else {
      const AffineFactor d{E.d0, E.d1, es};
      const AffineFactor r{E.r0, E.r1, rad};
      lumped_sing_[e] += omega * integrate_affine_product(E.h, {{1.0, 0.0, p}, d, r});
      lumped_sing_[e + 1] += omega * integrate_affine_product(E.h, {{0.0, 1.0, p}, d, r});
    }
  }
}

Assembler Assembler::with_lambda(double lambda) const {
  Assembler copy = *this;
  copy.params_ = params_.with_lambda(lambda);
  return copy;
}

std::vector<double> Assembler::pinned_values(const std::vector<double>& u) const {
  if (u.size() != n_nodes()) {
    throw Error(ErrorCode::BadMeshSpec, "nodal vector length does not match the mesh");
  }
  std::vector<double> v = u;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (pinned_[i]) v[i] = 0.0;
  }
  return v;
}

double Assembler::grad_power(double slope) const {
  const double p = params_.p();
  return p == 2.0 ? slope * slope : std::pow(std::abs(slope), p);
}

QuotientComponents Assembler::span_components(const Element& E, double ta, double tb, double ua,
                                              double ub, double slope) const {
  if ((ua < 0.0 && ub > 0.0) || (ua > 0.0 && ub < 0.0)) {
    const double ts = ta + (tb - ta) * ua / (ua - ub);
    const auto left = span_components(E, ta, ts, ua, 0.0, slope);
    const auto right = span_components(E, ts, tb, 0.0, ub, slope);
    return {left.grad_term + right.grad_term, left.mass_alpha + right.mass_alpha,
            left.mass_singular + right.mass_singular};
  }
  const double p = params_.p();
  const double len = (tb - ta) * E.h;
  const AffineFactor d_a{at(E.d0, E.d1, ta), at(E.d0, E.d1, tb), params_.alpha() * p};
  const AffineFactor d_s{d_a.left, d_a.right, (params_.alpha() - 1.0) * p};
  const AffineFactor rho{at(E.r0, E.r1, ta), at(E.r0, E.r1, tb), radial_exponent_};
  const AffineFactor uf{ua, ub, p};
  QuotientComponents c;
  c.grad_term = grad_power(slope) * radial_const_ * integrate_affine_product(len, {d_a, rho});
  c.mass_alpha = radial_const_ * integrate_affine_product(len, {uf, d_a, rho});
  c.mass_singular = radial_const_ * integrate_affine_product(len, {uf, d_s, rho});
  return c;
}

bool Assembler::use_table(const Element& E, double u0, double u1) const {
  if (!E.tabulated) return false;
  if (!((u0 > 0.0 && u1 > 0.0) || (u0 < 0.0 && u1 < 0.0))) return false;
  return integer_p_ || end_ratio(u0, u1) <= kSmoothRatio;
}

QuotientComponents Assembler::element_components(std::size_t e, double u0, double u1) const {
  const Element& E = elements_[e];
  const double p = params_.p();
  const double slope = (u1 - u0) / E.h;
  QuotientComponents c;
  c.grad_term = grad_power(slope) * wg_[e];
  if (E.boundary_end >= 0) {
    const double uf = E.boundary_end == 0 ? u1 : u0;
    const double m = p == 2.0 ? uf * uf : std::pow(std::abs(uf), p);
    c.mass_alpha = m * kalpha_[e];
    c.mass_singular = m * ksing_[e];
  } else if (use_table(E, u0, u1)) {
    double ma = 0.0;
    double ms = 0.0;
    for (std::size_t q = 0; q < kPoints; ++q) {
      const double uq = u0 + (u1 - u0) * phi1_[q];
      const double m = p == 2.0 ? uq * uq : std::pow(std::abs(uq), p);
      ma += walpha_[e][q] * m;
      ms += wsing_[e][q] * m;
    }
    c.mass_alpha = ma;
    c.mass_singular = ms;
  } else if (u0 != 0.0 || u1 != 0.0) {
    const auto s = span_components(E, 0.0, 1.0, u0, u1, slope);
    c.mass_alpha = s.mass_alpha;
    c.mass_singular = s.mass_singular;
  }
  return c;
}

QuotientComponents Assembler::components(const std::vector<double>& u_in) const {
  const auto u = pinned_values(u_in);
  if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::EmptyFunction, "u vanishes at every free node");
  }
  const std::size_t ne = elements_.size();
  std::vector<QuotientComponents> part(ne);
  parallel_for(ne, threads_, [&](std::size_t e) { part[e] = element_components(e, u[e], u[e + 1]); });
  QuotientComponents total;
  for (const auto& c : part) {
    total.grad_term += c.grad_term;
    total.mass_alpha += c.mass_alpha;
    total.mass_singular += c.mass_singular;
  }
  return total;
}

QuotientComponents Assembler::components_within(const std::vector<double>& u_in,
                                                double eta) const {
  const auto u = pinned_values(u_in);
  const std::size_t ne = elements_.size();
  std::vector<QuotientComponents> part(ne);
  parallel_for(ne, threads_, [&](std::size_t e) {
    const Element& E = elements_[e];
    const double lo = std::min(E.d0, E.d1);
    const double hi = std::max(E.d0, E.d1);
    if (hi <= eta) {
      part[e] = element_components(e, u[e], u[e + 1]);
    } else if (lo < eta) {
      const double tc = (eta - E.d0) / (E.d1 - E.d0);
      const double uc = at(u[e], u[e + 1], tc);
      const double slope = (u[e + 1] - u[e]) / E.h;
      part[e] = E.d0 < E.d1 ? span_components(E, 0.0, tc, u[e], uc, slope)
                            : span_components(E, tc, 1.0, uc, u[e + 1], slope);
    }
  });
  QuotientComponents total;
  for (const auto& c : part) {
    total.grad_term += c.grad_term;
    total.mass_alpha += c.mass_alpha;
    total.mass_singular += c.mass_singular;
  }
  return total;
}

double Assembler::chi(const std::vector<double>& u) const {
  return hardy::chi(params_, components(u));
}

void Assembler::span_weak(const Element& E, double ta, double tb, double ua, double ub,
                          std::array<double, 4>& out) const {
  if ((ua < 0.0 && ub > 0.0) || (ua > 0.0 && ub < 0.0)) {
    const double ts = ta + (tb - ta) * ua / (ua - ub);
    span_weak(E, ta, ts, ua, 0.0, out);
    span_weak(E, ts, tb, 0.0, ub, out);
    return;
  }
  if (ua == 0.0 && ub == 0.0) return;
  const double p = params_.p();
  const double sign = (ua + ub) > 0.0 ? 1.0 : -1.0;
  const double len = (tb - ta) * E.h;
  const AffineFactor d_a{at(E.d0, E.d1, ta), at(E.d0, E.d1, tb), params_.alpha() * p};
  const AffineFactor d_s{d_a.left, d_a.right, (params_.alpha() - 1.0) * p};
  const AffineFactor rho{at(E.r0, E.r1, ta), at(E.r0, E.r1, tb), radial_exponent_};
  const AffineFactor uf{ua, ub, p - 1.0};
  const AffineFactor phi0{1.0 - ta, 1.0 - tb, 1.0};
  const AffineFactor phi1{ta, tb, 1.0};
  const double c = sign * radial_const_;
  out[0] += c * integrate_affine_product(len, {uf, phi0, d_a, rho});
  out[1] += c * integrate_affine_product(len, {uf, phi1, d_a, rho});
  out[2] += c * integrate_affine_product(len, {uf, phi0, d_s, rho});
  out[3] += c * integrate_affine_product(len, {uf, phi1, d_s, rho});
}

void Assembler::element_weak(std::size_t e, double u0, double u1, bool regularize,
                             std::array<double, 6>& out) const {
  const Element& E = elements_[e];
  const double p = params_.p();
  const double slope = (u1 - u0) / E.h;
  double flux;
  if (p == 2.0) {
    flux = slope;
  } else if (regularize && p < 2.0) {
    flux = std::pow(slope * slope + 1e-24, 0.5 * (p - 2.0)) * slope;
  } else {
    flux = signed_power(slope, p - 1.0);
  }
  flux *= wg_[e] / E.h;
  out = {-flux, flux, 0.0, 0.0, 0.0, 0.0};
  if (E.boundary_end >= 0) {
    const double uf = E.boundary_end == 0 ? u1 : u0;
    const double m = p == 2.0 ? uf : signed_power(uf, p - 1.0);
    const std::size_t k = E.boundary_end == 0 ? 1 : 0;
    out[2 + k] = m * kalpha_[e];
    out[4 + k] = m * ksing_[e];
  } else if (use_table(E, u0, u1)) {
    for (std::size_t q = 0; q < kPoints; ++q) {
      const double uq = u0 + (u1 - u0) * phi1_[q];
      const double m = p == 2.0 ? uq : signed_power(uq, p - 1.0);
      const double ma = walpha_[e][q] * m;
      const double ms = wsing_[e][q] * m;
      out[2] += ma * (1.0 - phi1_[q]);
      out[3] += ma * phi1_[q];
      out[4] += ms * (1.0 - phi1_[q]);
      out[5] += ms * phi1_[q];
    }
  } else if (u0 != 0.0 || u1 != 0.0) {
    std::array<double, 4> w{0.0, 0.0, 0.0, 0.0};
    span_weak(E, 0.0, 1.0, u0, u1, w);
    out[2] = w[0];
    out[3] = w[1];
    out[4] = w[2];
    out[5] = w[3];
  }
}

WeakForms Assembler::weak_forms(const std::vector<double>& u_in, bool regularize) const {
  const auto u = pinned_values(u_in);
  const std::size_t ne = elements_.size();
  std::vector<std::array<double, 6>> part(ne);
  parallel_for(ne, threads_,
               [&](std::size_t e) { element_weak(e, u[e], u[e + 1], regularize, part[e]); });
  WeakForms w;
  w.stiffness.assign(n_nodes(), 0.0);
  w.mass_alpha.assign(n_nodes(), 0.0);
  w.mass_singular.assign(n_nodes(), 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    w.stiffness[e] += part[e][0];
    w.stiffness[e + 1] += part[e][1];
    w.mass_alpha[e] += part[e][2];
    w.mass_alpha[e + 1] += part[e][3];
    w.mass_singular[e] += part[e][4];
    w.mass_singular[e + 1] += part[e][5];
  }
  for (std::size_t i = 0; i < n_nodes(); ++i) {
    if (pinned_[i]) w.stiffness[i] = w.mass_alpha[i] = w.mass_singular[i] = 0.0;
  }
  return w;
}

double Assembler::chi_and_gradient(const std::vector<double>& u, std::vector<double>& grad) const {
  const auto c = components(u);
  const double value = hardy::chi(params_, c);
  const auto w = weak_forms(u, params_.p() < 2.0);
  const double p = params_.p();
  const double lambda = params_.lambda();
  grad.assign(n_nodes(), 0.0);
  for (std::size_t i = 0; i < n_nodes(); ++i) {
    if (pinned_[i]) continue;
    grad[i] = p * (w.stiffness[i] - lambda * w.mass_alpha[i] - value * w.mass_singular[i]) /
              c.mass_singular;
  }
  return value;
}

std::vector<double> Assembler::chi_gradient(const std::vector<double>& u) const {
  std::vector<double> g;
  chi_and_gradient(u, g);
  return g;
}

std::vector<double> Assembler::weak_residual_vector(const std::vector<double>& u) const {
  const double value = chi(u);
  const auto w = weak_forms(u, false);
  const double lambda = params_.lambda();
  std::vector<double> r(n_free_);
  for (std::size_t k = 0; k < n_free_; ++k) {
    const std::size_t i = first_free_ + k;
    r[k] = w.stiffness[i] - lambda * w.mass_alpha[i] - value * w.mass_singular[i];
  }
  return r;
}

double Assembler::weak_residual(const std::vector<double>& u) const {
  const auto r = weak_residual_vector(u);
  const auto z = ldl(preconditioner()).solve(r);
  return std::sqrt(std::max(dot(r, z), 0.0));
}

P2Matrices Assembler::p2_matrices() const {
  if (params_.p() != 2.0) throw Error(ErrorCode::WrongExponent, "quadratic matrices need p = 2");
  const std::size_t nn = n_nodes();
  const std::size_t ne = elements_.size();
  SymTridiagonal A{std::vector<double>(nn, 0.0), std::vector<double>(nn - 1, 0.0)};
  SymTridiagonal M = A;
  SymTridiagonal S = A;
  const double ea = 2.0 * params_.alpha();
  const double es = ea - 2.0;
  std::vector<std::array<double, 9>> part(ne);
  parallel_for(ne, threads_, [&](std::size_t e) {
    const Element& E = elements_[e];
    const AffineFactor rho{E.r0, E.r1, radial_exponent_};
    const AffineFactor d_a{E.d0, E.d1, ea};
    const AffineFactor d_s{E.d0, E.d1, es};
    auto& out = part[e];
    out.fill(0.0);
    const double k = wg_[e] / (E.h * E.h);
    out[0] = k;
    out[1] = -k;
    out[2] = k;
    const bool keep0 = !pinned_[e];
    const bool keep1 = !pinned_[e + 1];
    const double w = radial_const_;
    if (keep0) {
      out[3] = w * integrate_affine_product(E.h, {{1.0, 0.0, 2.0}, d_a, rho});
      out[6] = w * integrate_affine_product(E.h, {{1.0, 0.0, 2.0}, d_s, rho});
    }
    if (keep0 && keep1) {
      out[4] = w * integrate_affine_product(E.h, {{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, d_a, rho});
      out[7] = w * integrate_affine_product(E.h, {{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, d_s, rho});
    }
    if (keep1) {
      out[5] = w * integrate_affine_product(E.h, {{0.0, 1.0, 2.0}, d_a, rho});
      out[8] = w * integrate_affine_product(E.h, {{0.0, 1.0, 2.0}, d_s, rho});
    }
  });
  SymTridiagonal* mats[3] = {&A, &M, &S};
  for (std::size_t e = 0; e < ne; ++e) {
    for (int m = 0; m < 3; ++m) {
      mats[m]->diag[e] += part[e][3 * m];
      mats[m]->off[e] += part[e][3 * m + 1];
      mats[m]->diag[e + 1] += part[e][3 * m + 2];
    }
  }
  P2Matrices out;
  out.first_free = first_free_;
  const auto slice = [&](const SymTridiagonal& T) {
    SymTridiagonal r;
    r.diag.assign(T.diag.begin() + first_free_, T.diag.begin() + first_free_ + n_free_);
    r.off.assign(T.off.begin() + first_free_, T.off.begin() + first_free_ + n_free_ - 1);
    return r;
  };
  out.A = slice(A);
  out.M = slice(M);
  out.S = slice(S);
  return out;
}

EnrichmentIntegrals Assembler::enrichment(const TrialLift& lift) const {
  if (params_.p() != 2.0) throw Error(ErrorCode::WrongExponent, "enrichment needs p = 2");
  const double eta = lift.eta();
  const double half = 0.5 * eta;
  const double beta = lift.profile().beta;
  const double ea = 2.0 * params_.alpha();
  const double es = ea - 2.0;
  const std::size_t ne = elements_.size();
  // per element: psi-psi (3), psi-phi for both ends (3 x 2)
  std::vector<std::array<double, 9>> part(ne);
  parallel_for(ne, threads_, [&](std::size_t e) {
    const Element& E = elements_[e];
    auto& out = part[e];
    out.fill(0.0);
    if (std::min(E.d0, E.d1) >= eta) return;
    // breakpoints in the local coordinate, with their exact delta values
    struct Point {
      double t;
      double d;
    };
    std::vector<Point> pts{{0.0, E.d0}, {1.0, E.d1}};
    for (double level : {half, eta}) {
      const double t = (level - E.d0) / (E.d1 - E.d0);
      if (t > 0.0 && t < 1.0) pts.push_back({t, level});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.t < b.t; });
    const double sd = (E.d1 - E.d0) / E.h;
    const bool keep[2] = {!pinned_[e], !pinned_[e + 1]};
    const double dphi[2] = {-1.0 / E.h, 1.0 / E.h};
    const double w = radial_const_;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const Point a = pts[k];
      const Point b = pts[k + 1];
      const double dm = 0.5 * (a.d + b.d);
      if (dm >= eta) continue;
      const double len = (b.t - a.t) * E.h;
      const AffineFactor rho{at(E.r0, E.r1, a.t), at(E.r0, E.r1, b.t), radial_exponent_};
      const AffineFactor d_a{a.d, b.d, ea};
      const AffineFactor d_s{a.d, b.d, es};
      const AffineFactor phi[2] = {{1.0 - a.t, 1.0 - b.t, 1.0}, {a.t, b.t, 1.0}};
      AffineFactor psi, dpsi;
      double dpsi_c;
      if (dm < half) {
        psi = {a.d / half, b.d / half, beta};
        dpsi = {a.d / half, b.d / half, beta - 1.0};
        dpsi_c = sd * beta / half;
      } else {
        psi = {a.d == eta ? 0.0 : 2.0 - a.d / half, b.d == eta ? 0.0 : 2.0 - b.d / half, 1.0};
        dpsi = {1.0, 1.0, 0.0};
        dpsi_c = -sd / half;
      }
      AffineFactor psi2 = psi;
      psi2.exponent *= 2.0;
      AffineFactor dpsi2 = dpsi;
      dpsi2.exponent *= 2.0;
      out[0] += w * dpsi_c * dpsi_c * integrate_affine_product(len, {dpsi2, d_a, rho});
      out[1] += w * integrate_affine_product(len, {psi2, d_a, rho});
      out[2] += w * integrate_affine_product(len, {psi2, d_s, rho});
      for (int j = 0; j < 2; ++j) {
        if (!keep[j]) continue;
        out[3 + j] += w * dpsi_c * dphi[j] * integrate_affine_product(len, {dpsi, d_a, rho});
        out[5 + j] += w * integrate_affine_product(len, {psi, phi[j], d_a, rho});
        out[7 + j] += w * integrate_affine_product(len, {psi, phi[j], d_s, rho});
      }
    }
  });
  EnrichmentIntegrals r;
  r.grad_psi_phi.assign(n_nodes(), 0.0);
  r.mass_alpha_psi_phi.assign(n_nodes(), 0.0);
  r.mass_singular_psi_phi.assign(n_nodes(), 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    r.grad_psi_psi += part[e][0];
    r.mass_alpha_psi_psi += part[e][1];
    r.mass_singular_psi_psi += part[e][2];
    for (int j = 0; j < 2; ++j) {
      r.grad_psi_phi[e + j] += part[e][3 + j];
      r.mass_alpha_psi_phi[e + j] += part[e][5 + j];
      r.mass_singular_psi_phi[e + j] += part[e][7 + j];
    }
  }
  return r;
}

SymTridiagonal Assembler::preconditioner() const {
  return hessian_model(std::vector<double>(n_nodes(), 1.0));
}

SymTridiagonal Assembler::hessian_model(const std::vector<double>& u_in) const {
  const auto u = pinned_values(u_in);
  const std::size_t nn = n_nodes();
  const double p = params_.p();
  std::vector<double> diag(nn, 0.0);
  std::vector<double> off(nn - 1, 0.0);
  double slope_max = 0.0;
  double u_max = 0.0;
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    slope_max = std::max(slope_max, std::abs(u[e + 1] - u[e]) / elements_[e].h);
  }
  for (double v : u) u_max = std::max(u_max, std::abs(v));
  const double slope_floor = 1e-8 * slope_max;
  const double u_floor = 1e-8 * u_max;
  const auto weight = [&](double x, double floor) {
    if (p == 2.0) return 1.0;
    return std::pow(std::max(std::abs(x), floor), p - 2.0);
  };
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const Element& E = elements_[e];
    const double k = (p - 1.0) * wg_[e] / (E.h * E.h) * weight((u[e + 1] - u[e]) / E.h, slope_floor);
    diag[e] += k;
    diag[e + 1] += k;
    off[e] -= k;
  }
  for (std::size_t i = 0; i < nn; ++i) diag[i] += (p - 1.0) * lumped_sing_[i] * weight(u[i], u_floor);
  SymTridiagonal P;
  P.diag.assign(diag.begin() + first_free_, diag.begin() + first_free_ + n_free_);
  P.off.assign(off.begin() + first_free_, off.begin() + first_free_ + n_free_ - 1);
  return P;
}

QuotientComponents assemble_components(const ProblemParams& params, const Domain& domain,
                                       const DiscreteFunction& u) {
  return Assembler(params, domain, u.mesh).components(u.values);
}

std::vector<double> chi_gradient(const ProblemParams& params, const Domain& domain,
                                 const DiscreteFunction& u) {
  return Assembler(params, domain, u.mesh).chi_gradient(u.values);
}

P2Matrices p2_matrices(const ProblemParams& params, const Domain& domain,
                       std::shared_ptr<const GradedMesh> mesh) {
  return Assembler(params, domain, std::move(mesh)).p2_matrices();
}

}  // namespace hardy
