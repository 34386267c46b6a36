#pragma once

#include <string>
#include <vector>

#include "hardy/solve.hpp"

namespace hardy {

struct JSample {
  double lambda;
  double j;
  bool converged;
};

struct JCurve {
  std::vector<JSample> samples;
  std::size_t n_elements = 0;
  double grading_ratio = 1.0;
  std::string mesh_hash;
};

/// Discrete J at each lambda (ascending, else Config).  For p != 2 every
/// sample after the first starts from the previous minimizer unless
/// warm_start is false.
JCurve j_sweep(const ProblemParams& params, const Domain& domain,
               std::shared_ptr<const GradedMesh> mesh, const std::vector<double>& lambdas,
               const SolverOptions& options = {}, bool warm_start = true);

/// -Lambda eta^{-p}: every lambda at or below it lies on the plateau
/// J = Lambda.  eta must lie in (0, eta_max); throws BadEta.
double plateau_lower_bracket(const ProblemParams& params, const Domain& domain, double eta);

enum class LowerProvenance { PlateauBound, NumericalPlateau };
const char* to_string(LowerProvenance provenance);

struct LambdaProbe {
  double lambda;
  double j;
  bool drop;
};

struct LambdaStarEstimate {
  double lo = 0.0;
  double hi = 0.0;
  LowerProvenance lo_provenance = LowerProvenance::PlateauBound;
  double drop_tolerance = 0.0;
  double plateau_bound = 0.0;
  double j_hi = 0.0;  // discrete J at hi on the deciding mesh
  double j_lo = 0.0;
  std::size_t deciding_elements = 0;
  std::vector<LambdaProbe> probes;  // in evaluation order
};

struct LambdaStarOptions {
  std::vector<std::size_t> schedule{256, 1024, 4096};
  double grading_ratio = 0.7;
  double drop_tolerance = -1.0;  // negative: 1e-3 Lambda
  double width = 0.25;
  double eta = -1.0;             // negative: eta_max / 2
  double scan_limit = 1e6;
  SolverOptions solver;
};

/// Brackets lambda*.  Starting from the plateau bound, an upward scan at
/// lo + 1, lo + 2, lo + 4, ... finds a certified drop (discrete J below
/// Lambda - drop_tolerance on the finest scheduled mesh); bisection then
/// shrinks the bracket to the requested width.  Probes without a drop move
/// lo and mark it as a numerical plateau, which is not a certificate.
/// Throws ScanExhausted when no drop is found below scan_limit.
LambdaStarEstimate estimate_lambda_star(const ProblemParams& params, const Domain& domain,
                                        const LambdaStarOptions& options = {});

}  // namespace hardy
