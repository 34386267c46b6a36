#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hardy/assembly.hpp"

namespace hardy {

struct SolverOptions {
  double eigen_tolerance = 1e-10;     // relative eigen-residual, p = 2
  double gradient_tolerance = 1e-8;   // times max(1, |chi|), general p
  std::size_t max_iterations = 100000;
  std::size_t starts = 3;             // trial lift + (starts - 1) random
  std::uint64_t seed = 20240611;
  int threads = 1;
};

struct MinimizeResult {
  /// Discrete upper bound on J.  For the plain space this is chi of the
  /// minimizer evaluated through the component integrals.
  double j_value = 0.0;
  /// Normalized to unit singular mass.  With enrichment this holds the
  /// piecewise-linear part only.
  DiscreteFunction minimizer;
  std::size_t iterations = 0;
  double el_residual = 0.0;
  bool converged = false;
  /// Index of the winning start (general p) or 0.
  std::size_t start_index = 0;
  /// Smallest generalized eigenvalue (p = 2) or the final descent value.
  double eigenvalue = 0.0;
  /// Relative residual of the eigenpair, p = 2 only.
  double eigen_residual = 0.0;
  /// Coefficient of the trial lift when the space is enriched.
  std::optional<double> enrichment_coefficient;
};

/// Smallest generalized eigenvalue of (A - lambda M) x = mu S x by Sturm
/// bisection followed by shifted inverse iteration.  With `enrich`, the
/// trial lift is appended to the basis (bordered tridiagonal system).
/// WrongExponent unless p = 2.
MinimizeResult minimize_p2(const Assembler& assembler, const SolverOptions& options = {},
                           const TrialLift* enrich = nullptr);

/// Preconditioned nonlinear conjugate gradients on chi with renormalization
/// to unit singular mass after each accepted step and Armijo backtracking
/// (halving, sufficient decrease 1e-4).  Converged when the gradient in
/// the dual norm of preconditioner() is at most gradient_tolerance times
/// max(1, |chi|); for p < 2 a search stalled at rounding level also counts
/// once that norm is below gradient_tolerance^{p-1} times the same scale.
/// Non-convergence is reported in the result, never thrown.
/// When `trace` is given, every normalized iterate (including the start)
/// is appended to it.
MinimizeResult descend(const Assembler& assembler, const std::vector<double>& init,
                       const SolverOptions& options = {},
                       std::vector<std::vector<double>>* trace = nullptr);

/// Multi-start descent: start 0 is the interpolated trial lift, starts
/// 1.. are smoothed seeded random functions.  Starts run concurrently;
/// the winner is the smallest j_value, ties within 1e-12 going to the
/// lowest start index.
MinimizeResult minimize_general(const Assembler& assembler, const SolverOptions& options = {});

/// minimize_p2 for p = 2, minimize_general otherwise.
MinimizeResult minimize(const Assembler& assembler, const SolverOptions& options = {});

/// Starting vectors used by minimize_general.
std::vector<double> trial_lift_start(const Assembler& assembler);
/// Uniform values from a 64-bit Mersenne twister mapped to [lo, hi), one
/// (1, 2, 1)/4 smoothing pass, constrained nodes zeroed.
std::vector<double> random_start(const Assembler& assembler, std::uint64_t seed, double lo = 0.0,
                                 double hi = 1.0);

/// Weak Euler-Lagrange residual norm.
double el_residual(const Assembler& assembler, const std::vector<double>& u);

struct ConcentrationReport {
  std::vector<std::pair<double, double>> eta_fractions;  // (eta, fraction)
};

/// Share of the singular mass inside delta < eta for each eta.
ConcentrationReport concentration_profile(const Assembler& assembler,
                                          const std::vector<double>& u,
                                          const std::vector<double>& etas);

/// Fractions at one eta across a refinement sequence; true when the
/// series is non-decreasing.
bool non_decreasing(const std::vector<double>& series, double slack = 0.0);

}  // namespace hardy
