// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <hardy/core.hpp>
#include <hardy/error.hpp>
#include <hardy/io.hpp>
#include <hardy/lambda.hpp>
#include <hardy/solve.hpp>
#include <hardy/trial.hpp>
#include <hardy/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string data;  // serialized results for the determinism check
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.ok = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

std::string num(double x) { return format_double(x); }

std::shared_ptr<const GradedMesh> mesh_for(const Domain& d, std::size_t n) {
  return test::mesh_ptr(d, n, 0.7);
}

SolverOptions solver(int threads) {
  SolverOptions o;
  o.threads = threads;
  return o;
}

// plain-space discrete J on Interval(1), p = 2, alpha = 0
MinimizeResult solve_interval(std::size_t n, double lambda, int threads,
                              const TrialLift* enrich = nullptr) {
  const auto d = Domain::interval(1);
  Assembler a(validate_params(2, 0, lambda), d, mesh_for(d, n), threads);
  return enrich ? minimize_p2(a, solver(threads), enrich) : minimize(a, solver(threads));
}

Outcome sharp_constant_formula() {
  Outcome o;
  const double l2 = sharp_constant(validate_params(2, 0, 0)).value;
  const double l3 = sharp_constant(validate_params(3, 0, 0)).value;
  require(o, std::abs(l2 - 0.25) <= 1e-15, "Lambda(2,0) = " + num(l2));
  require(o, std::abs(l3 - 8.0 / 27.0) <= 1e-15, "Lambda(3,0) = " + num(l3));
  for (double p : {1.5, 2.0, 3.0}) {
    const double hi = 1.0 - 1.0 / p;
    double prev = INFINITY;
    for (int k = 0; k < 50; ++k) {
      const double a = -1.0 + (hi + 1.0) * k / 50.0;
      const double v = sharp_constant(validate_params(p, a, 0)).value;
      require(o, v < prev, "not decreasing at p=" + num(p) + " alpha=" + num(a));
      prev = v;
    }
  }
  o.detail = o.ok ? "Lambda(2,0)=" + num(l2) + " Lambda(3,0)=" + num(l3) : o.detail;
  return o;
}

Outcome trial_limit() {
  Outcome o;
  double worst = 0, worst_q = 0;
  for (auto [p, a] : std::vector<std::pair<double, double>>{{2, 0}, {2, -0.25}, {1.5, 0}, {3, -1}}) {
    const auto pr = validate_params(p, a, 0);
    const double lam = sharp_constant(pr).value;
    const double gap = pr.subcritical_gap();
    const double q = trial_quotient(gap + std::ldexp(1.0, -20), pr);
    worst = std::max(worst, std::abs(q - lam));
    require(o, std::abs(q - lam) <= 1e-4, "limit off at p=" + num(p) + " alpha=" + num(a));
    for (double off : {1.0, 0.5, 0.25, 1.0 / 16}) {
      const double beta = gap + off;
      const double P = p;
      const double num_q =
          test::ts_integral([&](double t) { return std::pow(beta, P) * std::pow(t, (beta - 1) * P + a * P); }, 0, 1) +
          test::gk_integral([&](double t) { return std::pow(t, a * P); }, 1, 2);
      const double den_q =
          test::ts_integral([&](double t) { return std::pow(t, beta * P + (a - 1) * P); }, 0, 1) +
          test::gk_integral([&](double t) { return std::pow(2 - t, P) * std::pow(t, (a - 1) * P); }, 1, 2);
      const double e1 = test::rel_err(trial_numerator(beta, pr), num_q);
      const double e2 = test::rel_err(trial_denominator(beta, pr), den_q);
      worst_q = std::max({worst_q, e1, e2});
      require(o, e1 <= 1e-8 && e2 <= 1e-8, "closed form off at beta=" + num(beta));
    }
  }
  if (o.ok) o.detail = "max |Q - Lambda| = " + num(worst) + ", max quadrature rel err = " + num(worst_q);
  return o;
}

Outcome gradient_correctness() {
  Outcome o;
  test::Gen g(11);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double p = g.pick(std::vector<double>{1.5, 2.0, 3.0});
    const double lo = -1.0 / p, hi = 1.0 - 1.0 / p;
    const double a = g.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
    const auto pr = validate_params(p, a, g.uniform(-5, 5));
    const auto d = g.domain();
    Assembler as(pr, d, test::mesh_ptr(d, std::size_t(2 * g.integer(3, 12)), g.uniform(0.4, 1.0)));
    const auto u = g.values(as);
    const auto grad = as.chi_gradient(u);
    double diff = 0, ref = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (as.constrained()[k]) continue;
      const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
      auto up = u, dn = u;
      up[k] += h;
      dn[k] -= h;
      const double fd = (as.chi(up) - as.chi(dn)) / (2 * h);
      diff += (grad[k] - fd) * (grad[k] - fd);
      ref += fd * fd;
    }
    const double rel = std::sqrt(diff / ref);
    worst = std::max(worst, rel);
    require(o, rel <= 1e-6, "instance " + std::to_string(i) + " rel err " + num(rel));
  }
  if (o.ok) o.detail = "worst relative error " + num(worst);
  return o;
}

Outcome hardy_recovery(int threads) {
  Outcome o;
  std::vector<double> js;
  for (std::size_t n : {256, 1024, 4096}) js.push_back(solve_interval(n, 0, threads).j_value);
  for (std::size_t i = 0; i < js.size(); ++i) {
    require(o, js[i] >= 0.25 - 1e-6, "J below Lambda");
    if (i > 0) require(o, js[i] <= js[i - 1], "J increased under refinement");
  }
  require(o, js[2] <= 0.30, "J(4096) above 0.30");
  const auto pr = validate_params(2, 0, 0);
  const TrialLift lift(Domain::interval(1), pr, pr.subcritical_gap() + 1e-4, 0.25);
  const double rich = solve_interval(4096, 0, threads, &lift).j_value;
  require(o, std::abs(rich - 0.25) < std::abs(js[2] - 0.25), "enrichment not closer");
  o.data = "J " + num(js[0]) + " " + num(js[1]) + " " + num(js[2]) + "\nenriched " + num(rich) + "\n";
  if (o.ok) o.detail = "J = " + num(js[0]) + ", " + num(js[1]) + ", " + num(js[2]) + "; enriched " + num(rich);
  return o;
}

Outcome j_structure(int threads) {
  Outcome o;
  const auto d = Domain::interval(1);
  const std::vector<double> lambdas{-6, -4, -2, 0, 2, 5, 10, 50};
  const auto c = j_sweep(validate_params(2, 0, 0), d, mesh_for(d, 1024), lambdas, solver(threads));
  const double tol = SolverOptions{}.eigen_tolerance;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& s = c.samples[i];
    require(o, s.converged, "lambda " + num(s.lambda) + " not converged");
    o.data += num(s.lambda) + " " + num(s.j) + "\n";
    if (i == 0) continue;
    const auto& r = c.samples[i - 1];
    require(o, s.j <= r.j + 1e-8, "increase at lambda " + num(s.lambda));
    require(o, std::abs(s.j - r.j) <= 0.25 * (s.lambda - r.lambda) + 2 * tol,
            "Lipschitz bound broken at lambda " + num(s.lambda));
  }
  const double j50 = c.samples.back().j;
  require(o, j50 < 0.25 - 1e-3, "no certified drop at lambda 50");
  if (o.ok) o.detail = "J(-6)=" + num(c.samples.front().j) + " J(50)=" + num(j50);
  return o;
}

Outcome plateau_consistency(int threads) {
  Outcome o;
  const auto d = Domain::interval(1);
  const double b = plateau_lower_bracket(validate_params(2, 0, 0), d, 0.25);
  require(o, b == -4.0, "bracket " + num(b));
  const double j6 = solve_interval(1024, -6, threads).j_value;
  const double j4 = solve_interval(1024, -4, threads).j_value;
  require(o, j4 >= 0.25 - (j6 - 0.25), "J(-4) below the plateau band");
  o.data = num(b) + " " + num(j6) + " " + num(j4) + "\n";
  if (o.ok) o.detail = "bracket " + num(b) + ", J(-6)=" + num(j6) + " J(-4)=" + num(j4);
  return o;
}

Outcome lambda_star_bracket(int threads) {
  Outcome o;
  const auto pr = validate_params(2, 0, 0);
  const double lam = sharp_constant(pr).value;
  std::vector<LambdaStarEstimate> est;
  for (const auto& schedule : std::vector<std::vector<std::size_t>>{{256, 1024}, {256, 1024, 4096}}) {
    LambdaStarOptions opt;
    opt.schedule = schedule;
    opt.solver.threads = threads;
    const auto e = estimate_lambda_star(pr, Domain::interval(1), opt);
    require(o, e.lo >= -4.0, "lo below the plateau bound");
    require(o, e.j_hi < lam - 1e-3 * lam, "hi not certified");
    require(o, e.hi - e.lo <= 0.5, "bracket too wide");
    o.data += num(e.lo) + " " + num(e.hi) + " " + num(e.j_hi) + "\n";
    est.push_back(e);
  }
  require(o, std::max(est[0].lo, est[1].lo) <= std::min(est[0].hi, est[1].hi), "brackets disjoint");
  if (o.ok) {
    o.detail = "[" + num(est[0].lo) + ", " + num(est[0].hi) + "] and [" + num(est[1].lo) + ", " +
               num(est[1].hi) + "]";
  }
  return o;
}

Outcome inequality_family(int threads) {
  Outcome o;
  double worst_local = INFINITY, worst_improved = INFINITY;
  const std::vector<std::pair<double, double>> pairs{{2, 0}, {2, 0.25}, {2, -0.25}, {1.5, 0}, {3, 0}, {3, -0.2}};
  for (const auto& d : {Domain::interval(1), Domain::ball(2, 1)}) {
    for (auto [p, a] : pairs) {
      const auto pr = validate_params(p, a, 0);
      Assembler as(pr, d, test::mesh_ptr(d, 256, 0.7), threads);
      const double eta = d.eta_max() / 2;
      const auto corpus = random_corpus(as, 200, 7);
      const auto loc = check_local_hardy(as, eta, corpus);
      const auto imp = check_improved(as, plateau_lower_bracket(pr, d, eta), corpus);
      const std::string tag = "p=" + num(p) + " alpha=" + num(a);
      require(o, loc.pass && loc.worst_ratio >= 1 - 1e-9, "local_hardy fails " + tag);
      require(o, imp.pass, "improved_hardy fails " + tag);
      worst_local = std::min(worst_local, loc.worst_ratio);
      worst_improved = std::min(worst_improved, imp.worst_ratio);
      o.data += tag + " " + num(loc.worst_ratio) + " " + num(imp.worst_ratio) + "\n";
    }
  }
  if (o.ok) o.detail = "worst local " + num(worst_local) + ", worst improved " + num(worst_improved);
  return o;
}

Outcome concentration_trend(int threads) {
  Outcome o;
  const auto d = Domain::interval(1);
  std::vector<double> fr;
  for (std::size_t n : {256, 1024, 4096}) {
    Assembler a(validate_params(2, 0, -10), d, mesh_for(d, n), threads);
    const auto r = minimize(a, solver(threads));
    fr.push_back(concentration_profile(a, r.minimizer.values, {0.05}).eta_fractions[0].second);
    o.data += std::to_string(n) + " " + num(fr.back()) + "\n";
  }
  require(o, non_decreasing(fr), "fraction decreased");
  o.detail = "fractions " + num(fr[0]) + ", " + num(fr[1]) + ", " + num(fr[2]);
  return o;
}

using Producer = std::function<Outcome(int)>;

const std::vector<std::pair<std::string, Producer>>& producers() {
  static const std::vector<std::pair<std::string, Producer>> list{
      {"hardy_recovery", hardy_recovery},   {"j_structure", j_structure},
      {"plateau", plateau_consistency},     {"lambda_star", lambda_star_bracket},
      {"inequalities", inequality_family}, {"concentration", concentration_trend}};
  return list;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Row {
  int id;
  std::string name;
  double limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_data");
  fs::create_directories(out_dir / "run1");
  std::vector<Row> rows{
      {1, "sharp constant formula", 1, sharp_constant_formula},
      {2, "trial quotient limit and closed forms", 5, trial_limit},
      {3, "gradient against finite differences", 30, gradient_correctness},
  };
  const double limits[] = {60, 120, 30, 300, 120, 120};
  const char* names[] = {"classical Hardy recovery", "J(lambda) structure", "plateau bracket",
                         "lambda* bracketing", "inequality family", "concentration trend"};
  for (std::size_t i = 0; i < producers().size(); ++i) {
    rows.push_back({int(i) + 4, names[i], limits[i], [i, out_dir] {
                      auto o = producers()[i].second(1);
                      write_file(out_dir / "run1" / (producers()[i].first + ".txt"), o.data);
                      return o;
                    }});
  }
  rows.push_back({10, "determinism", 0, [out_dir] {
                    Outcome o;
                    for (const auto& [dir, threads] : std::vector<std::pair<std::string, int>>{{"run2", 1}, {"run3", 4}}) {
                      fs::create_directories(out_dir / dir);
                      for (const auto& [name, make] : producers()) {
                        write_file(out_dir / dir / (name + ".txt"), make(threads).data);
                        const bool same = read_file(out_dir / "run1" / (name + ".txt")) ==
                                          read_file(out_dir / dir / (name + ".txt"));
                        require(o, same, name + " differs in " + dir);
                      }
                    }
                    if (o.ok) o.detail = "repeat and 4-thread runs byte-identical";
                    return o;
                  }});

  bool all = true;
  for (const auto& row : rows) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = row.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (row.limit > 0 && secs >= row.limit) {
      o.ok = false;
      o.detail += " (over the " + num(row.limit) + " s limit)";
    }
    all = all && o.ok;
    std::printf("%s %2d %s [%.2f s]: %s\n", o.ok ? "PASS" : "FAIL", row.id, row.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
