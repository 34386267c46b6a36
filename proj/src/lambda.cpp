#include "hardy/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardy/error.hpp"

namespace hardy {

JCurve j_sweep(const ProblemParams& params, const Domain& domain,
               std::shared_ptr<const GradedMesh> mesh, const std::vector<double>& lambdas,
               const SolverOptions& options, bool warm_start) {
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) {
      throw Error(ErrorCode::Config, "sweep lambdas must be strictly increasing");
    }
  }
  JCurve curve;
  curve.n_elements = mesh->n_elements();
  curve.grading_ratio = mesh->grading_ratio;
  curve.mesh_hash = mesh_hash(*mesh);
  Assembler base(params, domain, mesh, options.threads);
  std::vector<double> previous;
  for (double lambda : lambdas) {
    const Assembler a = base.with_lambda(lambda);
    MinimizeResult r;
    if (params.p() == 2.0) {
      r = minimize_p2(a, options);
    } else if (warm_start && !previous.empty()) {
      r = descend(a, previous, options);
    } else {
      r = minimize_general(a, options);
    }
    previous = r.minimizer.values;
    curve.samples.push_back({lambda, r.j_value, r.converged});
  }
  return curve;
}

double plateau_lower_bracket(const ProblemParams& params, const Domain& domain, double eta) {
  if (!(eta > 0.0 && eta < domain.eta_max())) {
    std::ostringstream msg;
    msg << "eta must lie in (0, " << domain.eta_max() << "), got " << eta;
    throw Error(ErrorCode::BadEta, msg.str());
  }
  return -sharp_constant(params).value * std::pow(eta, -params.p());
}

const char* to_string(LowerProvenance provenance) {
  return provenance == LowerProvenance::PlateauBound ? "plateau_bound" : "numerical_plateau";
}

LambdaStarEstimate estimate_lambda_star(const ProblemParams& params, const Domain& domain,
                                        const LambdaStarOptions& options) {
  if (options.schedule.empty()) throw Error(ErrorCode::Config, "empty refinement schedule");
  const double Lambda = sharp_constant(params).value;
  const double tol = options.drop_tolerance < 0.0 ? 1e-3 * Lambda : options.drop_tolerance;
  if (!(tol > 0.0)) throw Error(ErrorCode::Config, "drop tolerance must be positive");
  if (!(options.width > 0.0)) throw Error(ErrorCode::Config, "bracket width must be positive");
  const double eta = options.eta < 0.0 ? 0.5 * domain.eta_max() : options.eta;
  const std::size_t finest =
      *std::max_element(options.schedule.begin(), options.schedule.end());
  auto mesh = std::make_shared<const GradedMesh>(
      build_mesh(domain, finest, options.grading_ratio));
  const Assembler base(params, domain, mesh, options.solver.threads);

  LambdaStarEstimate est;
  est.drop_tolerance = tol;
  est.deciding_elements = finest;
  const auto evaluate = [&](double lambda) {
    const double j = minimize(base.with_lambda(lambda), options.solver).j_value;
    const bool drop = j < Lambda - tol;
    est.probes.push_back({lambda, j, drop});
    return std::pair{j, drop};
  };

  const double lo0 = plateau_lower_bracket(params, domain, eta);
  est.plateau_bound = lo0;
  est.lo = lo0;
  est.lo_provenance = LowerProvenance::PlateauBound;
  auto [j0, drop0] = evaluate(lo0);
  if (drop0) {
    throw Error(ErrorCode::NotFound,
                "discrete J already drops at the plateau bound; the mesh is too coarse");
  }
  est.j_lo = j0;

  double step = 1.0;
  for (;;) {
    const double lambda = lo0 + step;
    if (lambda > options.scan_limit) {
      throw Error(ErrorCode::ScanExhausted, "no drop of J found below the scan limit");
    }
    auto [j, drop] = evaluate(lambda);
    if (drop) {
      est.hi = lambda;
      est.j_hi = j;
      break;
    }
    est.lo = lambda;
    est.j_lo = j;
    est.lo_provenance = LowerProvenance::NumericalPlateau;
    step *= 2.0;
  }

  while (est.hi - est.lo > options.width) {
    const double mid = 0.5 * (est.lo + est.hi);
    auto [j, drop] = evaluate(mid);
    if (drop) {
      est.hi = mid;
      est.j_hi = j;
    } else {
      est.lo = mid;
      est.j_lo = j;
      est.lo_provenance = LowerProvenance::NumericalPlateau;
    }
  }
  return est;
}

}  // namespace hardy
