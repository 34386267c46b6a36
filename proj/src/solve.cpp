#include "hardy/solve.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "hardy/error.hpp"
#include "hardy/parallel.hpp"

namespace hardy {

namespace {

// Symmetric pencil (K, S) on a tridiagonal block, optionally bordered by
// one extra row and column.
struct Pencil {
  SymTridiagonal K;
  SymTridiagonal S;
  bool bordered = false;
  std::vector<double> kb, sb;
  double kc = 0.0, sc = 0.0;

  std::size_t n() const { return K.size(); }
  std::size_t dim() const { return n() + (bordered ? 1 : 0); }

  std::vector<double> apply(const SymTridiagonal& T, const std::vector<double>& b, double c,
                            const std::vector<double>& x) const {
    std::vector<double> head(x.begin(), x.begin() + static_cast<long>(n()));
    auto y = T.multiply(head);
    if (bordered) {
      const double z = x[n()];
      for (std::size_t i = 0; i < n(); ++i) y[i] += b[i] * z;
      y.push_back(dot(b, head) + c * z);
    }
    return y;
  }
  std::vector<double> mul_k(const std::vector<double>& x) const { return apply(K, kb, kc, x); }
  std::vector<double> mul_s(const std::vector<double>& x) const { return apply(S, sb, sc, x); }

  std::size_t count_below(double sigma) const {
    const auto f = ldl(combine(K, 1.0, S, -sigma));
    std::size_t neg = f.negative_pivots;
    if (bordered) {
      std::vector<double> b(n());
      for (std::size_t i = 0; i < n(); ++i) b[i] = kb[i] - sigma * sb[i];
      const auto y = f.solve(b);
      if (kc - sigma * sc - dot(b, y) < 0.0) ++neg;
    }
    return neg;
  }

  std::vector<double> solve(double sigma, const std::vector<double>& rhs) const {
    const auto f = ldl(combine(K, 1.0, S, -sigma));
    std::vector<double> r1(rhs.begin(), rhs.begin() + static_cast<long>(n()));
    auto w = f.solve(r1);
    if (!bordered) return w;
    std::vector<double> b(n());
    for (std::size_t i = 0; i < n(); ++i) b[i] = kb[i] - sigma * sb[i];
    const auto y = f.solve(b);
    const double z = (rhs[n()] - dot(b, w)) / (kc - sigma * sc - dot(b, y));
    for (std::size_t i = 0; i < n(); ++i) w[i] -= y[i] * z;
    w.push_back(z);
    return w;
  }
};

std::vector<double> embed(const Assembler& a, const std::vector<double>& free_values) {
  std::vector<double> u(a.n_nodes(), 0.0);
  for (std::size_t i = 0; i < a.n_free(); ++i) u[a.first_free() + i] = free_values[i];
  return u;
}

std::vector<double> restrict_free(const Assembler& a, const std::vector<double>& u) {
  return std::vector<double>(u.begin() + static_cast<long>(a.first_free()),
                             u.begin() + static_cast<long>(a.first_free() + a.n_free()));
}

}  // namespace

MinimizeResult minimize_p2(const Assembler& assembler, const SolverOptions& options,
                           const TrialLift* enrich) {
  if (assembler.params().p() != 2.0) {
    throw Error(ErrorCode::WrongExponent, "the eigenvalue solver needs p = 2");
  }
  const double lambda = assembler.params().lambda();
  const P2Matrices m = assembler.p2_matrices();
  const std::size_t n = m.S.size();
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = 1.0 / std::sqrt(m.S.diag[i]);

  Pencil pencil;
  pencil.K = scale_sym(combine(m.A, 1.0, m.M, -lambda), scale);
  pencil.S = scale_sym(m.S, scale);
  double psi_scale = 1.0;
  if (enrich != nullptr) {
    const auto e = assembler.enrichment(*enrich);
    psi_scale = 1.0 / std::sqrt(e.mass_singular_psi_psi);
    pencil.bordered = true;
    pencil.kb.resize(n);
    pencil.sb.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t node = m.first_free + i;
      const double s = scale[i] * psi_scale;
      pencil.kb[i] = (e.grad_psi_phi[node] - lambda * e.mass_alpha_psi_phi[node]) * s;
      pencil.sb[i] = e.mass_singular_psi_phi[node] * s;
    }
    pencil.kc = (e.grad_psi_psi - lambda * e.mass_alpha_psi_psi) * psi_scale * psi_scale;
    pencil.sc = 1.0;
  }
  const std::size_t dim = pencil.dim();

  // Bracket the smallest eigenvalue.  chi >= -max(lambda, 0) M^2 always.
  const double M = assembler.domain().sup_delta();
  double lo = -1.0 - std::max(lambda, 0.0) * M * M;
  for (int k = 0; k < 200 && pencil.count_below(lo) > 0; ++k) lo = 2.0 * lo - 1.0;
  std::vector<double> ones(dim, 1.0);
  double hi = dot(ones, pencil.mul_k(ones)) / dot(ones, pencil.mul_s(ones));
  hi += 1e-12 * (1.0 + std::abs(hi));
  for (int k = 0; k < 200 && pencil.count_below(hi) == 0; ++k) hi += (hi - lo);
  for (int k = 0; k < 300; ++k) {
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pencil.count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const double shift = lo - 1e-10 * std::max(1.0, std::abs(lo));
  std::vector<double> x = ones;
  double mu = hi;
  double rel = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (; it < 100; ++it) {
    auto y = pencil.solve(shift, pencil.mul_s(x));
    const double ny = norm2(y);
    for (auto& v : y) v /= ny;
    x = std::move(y);
    const auto kx = pencil.mul_k(x);
    const auto sx = pencil.mul_s(x);
    mu = dot(x, kx) / dot(x, sx);
    std::vector<double> r(dim);
    for (std::size_t i = 0; i < dim; ++i) r[i] = kx[i] - mu * sx[i];
    rel = norm2(r) / (norm2(kx) + std::abs(mu) * norm2(sx));
    if (rel <= options.eigen_tolerance) {
      ++it;
      break;
    }
  }

  const double snorm = std::sqrt(dot(x, pencil.mul_s(x)));
  std::vector<double> free_values(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    free_values[i] = scale[i] * x[i] / snorm;
    total += free_values[i];
  }
  double coef = pencil.bordered ? psi_scale * x[n] / snorm : 0.0;
  if (total + coef < 0.0) {
    for (auto& v : free_values) v = -v;
    coef = -coef;
  }

  MinimizeResult result;
  result.minimizer = {assembler.mesh(), embed(assembler, free_values)};
  result.iterations = it;
  result.eigenvalue = mu;
  result.eigen_residual = rel;
  result.converged = rel <= options.eigen_tolerance;
  if (pencil.bordered) {
    result.enrichment_coefficient = coef;
    result.j_value = mu;
    result.el_residual = rel;
  } else {
    result.j_value = assembler.chi(result.minimizer.values);
    result.el_residual = assembler.weak_residual(result.minimizer.values);
  }
  return result;
}

MinimizeResult descend(const Assembler& assembler, const std::vector<double>& init,
                       const SolverOptions& options,
                       std::vector<std::vector<double>>* trace) {
  const double p = assembler.params().p();
  const LdlFactor P0 = ldl(assembler.preconditioner());
  const auto dual_norm = [&](const std::vector<double>& g) {
    const auto gf = restrict_free(assembler, g);
    return std::sqrt(std::max(dot(gf, P0.solve(gf)), 0.0));
  };
  LdlFactor P;
  const auto precondition = [&](const std::vector<double>& g) {
    return embed(assembler, P.solve(restrict_free(assembler, g)));
  };
  const auto normalized = [&](std::vector<double> v, double mass) {
    const double s = std::pow(mass, -1.0 / p);
    for (auto& x : v) x *= s;
    return std::pair{std::move(v), s};
  };

  auto start = assembler.components(init);
  std::vector<double> u = normalized(init, start.mass_singular).first;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (assembler.constrained()[i]) u[i] = 0.0;
  }
  if (trace != nullptr) trace->push_back(u);
  std::vector<double> g;
  double value = assembler.chi_and_gradient(u, g);
  P = ldl(assembler.hessian_model(u));
  std::vector<double> z = precondition(g);
  std::vector<double> d(z.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z[i];
  struct Probe {
    bool ok = false;
    double t = 0.0;
    double value = 0.0;
    double slope = 0.0;
    double mass = 0.0;
    std::vector<double> point;
    std::vector<double> grad;
  };
  const auto probe = [&](const std::vector<double>& base, const std::vector<double>& dir,
                         double t) {
    Probe r;
    r.t = t;
    r.point.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) r.point[i] = base[i] + t * dir[i];
    try {
      const auto c = assembler.components(r.point);
      r.mass = c.mass_singular;
      r.value = assembler.chi_and_gradient(r.point, r.grad);
    } catch (const Error&) {
      return r;
    }
    r.slope = dot(r.grad, dir);
    r.ok = std::isfinite(r.value);
    return r;
  };
  double step = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  MinimizeResult result;
  std::size_t it = 0;
  bool converged = false;
  bool restarted = false;
  for (;;) {
    const double gnorm = dual_norm(g);
    if (gnorm <= options.gradient_tolerance * std::max(1.0, std::abs(value))) {
      converged = true;
      break;
    }
    if (it >= options.max_iterations) break;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z[i];
      slope = -dot(g, z);
    }
    // Secant on the directional derivative, which stays accurate long after
    // differences of chi have drowned in rounding; Armijo guards each
    // candidate and plain halving is the fallback.
    const double allowance = 8.0 * eps * std::abs(value);
    Probe best;
    const auto consider = [&](const Probe& c) {
      if (!c.ok || !(c.value <= value + 1e-4 * c.t * slope + allowance)) return;
      if (!best.ok || c.value < best.value - allowance ||
          (c.value <= best.value + allowance && std::abs(c.slope) < std::abs(best.slope))) {
        best = c;
      }
    };
    const Probe first = probe(u, d, step);
    consider(first);
    if (first.ok && first.slope != slope) {
      double t2 = first.t * slope / (slope - first.slope);
      if (first.slope < 0.0) t2 = std::min(t2, 4.0 * first.t);
      if (t2 > 0.0 && std::isfinite(t2)) consider(probe(u, d, t2));
    }
    for (double t = 0.5 * step; !best.ok && t > 1e-30 * step; t *= 0.5) consider(probe(u, d, t));
    if (!best.ok) {
      if (!restarted) {
        restarted = true;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z[i];
        step = 1.0;
        continue;
      }
      // stalled at rounding level; for p < 2 a residue of order tol^{p-1}
      // counts as stationary
      const double p = assembler.params().p();
      converged = p < 2.0 && gnorm <= std::pow(options.gradient_tolerance, p - 1.0) *
                                           std::max(1.0, std::abs(value));
      break;
    }
    restarted = false;
    auto [next, s] = normalized(std::move(best.point), best.mass);
    u = std::move(next);
    if (trace != nullptr) trace->push_back(u);
    value = best.value;
    std::vector<double> g_new = std::move(best.grad);
    for (auto& v : g_new) v /= s;
    P = ldl(assembler.hessian_model(u));
    auto z_new = precondition(g_new);
    const double t = best.t;
    // Polak-Ribiere+ in the rescaled coordinates: old gradient and
    // preconditioned gradient scale by 1/s, old direction by s.
    double num = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) num += z_new[i] * (g_new[i] - g[i] / s);
    const double den = dot(z, g) / (s * s);
    const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -z_new[i] + beta * s * d[i];
    g = std::move(g_new);
    z = std::move(z_new);
    step = t;
    ++it;
  }

  result.minimizer = {assembler.mesh(), u};
  result.iterations = it;
  result.converged = converged;
  result.j_value = assembler.chi(u);
  result.eigenvalue = value;
  result.el_residual = assembler.weak_residual(u);
  return result;
}

std::vector<double> trial_lift_start(const Assembler& assembler) {
  const auto& params = assembler.params();
  const Domain& domain = assembler.domain();
  const double beta = params.subcritical_gap() + 0.25;
  const TrialLift lift(domain, params, beta, domain.eta_max());
  return interpolate(domain, assembler.mesh(), [&](double r) { return lift(r); }).values;
}

std::vector<double> random_start(const Assembler& assembler, std::uint64_t seed, double lo,
                                 double hi) {
  std::mt19937_64 gen(seed);
  const std::size_t nn = assembler.n_nodes();
  std::vector<double> raw(nn);
  for (auto& v : raw) {
    v = lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }
  const auto& pinned = assembler.constrained();
  for (std::size_t i = 0; i < nn; ++i) {
    if (pinned[i]) raw[i] = 0.0;
  }
  std::vector<double> v(nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    if (pinned[i]) continue;
    const double left = i > 0 ? raw[i - 1] : raw[i];
    const double right = i + 1 < nn ? raw[i + 1] : raw[i];
    v[i] = 0.25 * (left + 2.0 * raw[i] + right);
  }
  return v;
}

MinimizeResult minimize_general(const Assembler& assembler, const SolverOptions& options) {
  const std::size_t starts = std::max<std::size_t>(options.starts, 1);
  Assembler serial = assembler;
  serial.set_threads(1);
  std::vector<MinimizeResult> results(starts);
  parallel_for(starts, options.threads, [&](std::size_t k) {
    const auto init = k == 0 ? trial_lift_start(serial) : random_start(serial, options.seed + k);
    results[k] = descend(serial, init, options);
    results[k].start_index = k;
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < starts; ++k) {
    if (results[k].j_value < results[best].j_value - 1e-12) best = k;
  }
  return results[best];
}

MinimizeResult minimize(const Assembler& assembler, const SolverOptions& options) {
  return assembler.params().p() == 2.0 ? minimize_p2(assembler, options)
                                       : minimize_general(assembler, options);
}

double el_residual(const Assembler& assembler, const std::vector<double>& u) {
  return assembler.weak_residual(u);
}

ConcentrationReport concentration_profile(const Assembler& assembler,
                                          const std::vector<double>& u,
                                          const std::vector<double>& etas) {
  const double total = assembler.components(u).mass_singular;
  ConcentrationReport report;
  for (double eta : etas) {
    const double inside = assembler.components_within(u, eta).mass_singular;
    report.eta_fractions.emplace_back(eta, std::clamp(inside / total, 0.0, 1.0));
  }
  return report;
}

bool non_decreasing(const std::vector<double>& series, double slack) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i] < series[i - 1] - slack) return false;
  }
  return true;
}

}  // namespace hardy
