#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hardy {

/// Nodes and weights on [-1, 1] for the weight (1 - t)^a (1 + t)^b.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction from the Jacobi three-term recurrence.
/// Requires a > -1 and b > -1.
GaussRule gauss_jacobi(std::size_t n, double a, double b);

/// Process-wide memoized gauss_jacobi; safe to call from several threads.
const GaussRule& cached_gauss_jacobi(std::size_t n, double a, double b);

struct AdaptiveResult {
  double value;
  double error_estimate;
  std::size_t intervals;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Subdivides the interval with the largest error estimate until the total
/// estimate drops below max(rel_tol * |I|, abs_tol).  Throws
/// Error{QuadratureFailure} when max_intervals is exhausted first.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b, double rel_tol = 1e-10,
                                  double abs_tol = 1e-300,
                                  std::size_t max_intervals = 4000);

}  // namespace hardy
